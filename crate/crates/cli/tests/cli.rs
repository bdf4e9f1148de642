use std::process::{Command, Output};

use areal_heights::equidist::EquidistRecord;
use areal_heights::pairings::RadiusOptimum;
use areal_heights::{HeightReport, KroneckerVerdict, PairingResult};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_areal-heights"))
        .args(args)
        .env_remove("AREAL_HEIGHTS_NODES")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_ratio_height() {
    let h: HeightReport = serde_json::from_str(&stdout(&["height", "--poly", "-1,-1,1", "--radii", "inf:1"])).unwrap();
    assert!((h.total - 0.211097).abs() < 1e-6);
    assert_eq!(h.h_infinity, 0.125);
}

#[test]
fn chebyshev_pairing() {
    let p: PairingResult =
        serde_json::from_str(&stdout(&["pairing", "--left", "areal:1", "--right", "chebyshev"])).unwrap();
    assert!((p.value - 0.339068).abs() < 1e-6);
}

#[test]
fn essential_minimum_plain() {
    let s = stdout(&["essential-min", "--radii", "inf:2", "--out", "plain"]);
    let v: f64 = s.trim().parse().unwrap();
    assert!((v - 0.096574).abs() < 1e-6);
    let json: serde_json::Value = serde_json::from_str(&stdout(&["essential-min", "--radii", "inf:2"])).unwrap();
    assert_eq!(json["regime"], "above");
}

#[test]
fn kronecker_round_trip() {
    let v: KroneckerVerdict =
        serde_json::from_str(&stdout(&["kronecker", "--alpha", "2", "--radii", "inf:2,2:0.5"])).unwrap();
    assert!(v.attains_minimum);
    assert_eq!(v.certificate.len(), 2);
    let v: KroneckerVerdict =
        serde_json::from_str(&stdout(&["kronecker", "--poly", "-1,-1,1", "--radii", "inf:1"])).unwrap();
    assert!(!v.attains_minimum);
}

#[test]
fn optimizer_round_trip() {
    let o: RadiusOptimum = serde_json::from_str(&stdout(&["optimize-radius", "--target", "circle:1"])).unwrap();
    assert!((o.r_star - 2f64.sqrt()).abs() < 1e-6 && !o.boundary);
    let o: RadiusOptimum = serde_json::from_str(&stdout(&[
        "optimize-radius", "--target", "circle:1", "--lo", "2", "--hi", "3",
    ]))
    .unwrap();
    assert!(o.boundary && o.r_star == 2.0);
}

#[test]
fn lehmer_csv_columns() {
    let s = stdout(&[
        "equidist", "lehmer", "--alpha", "1/2", "--primes", "5:499", "--radii", "inf:1", "--out", "csv",
    ]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("p,degree,height,gap,scaled_gap,p2_gap"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 93);
    assert!(rows.iter().all(|r| r.len() == 6));
    assert_eq!(rows[0][0], "5");
    let last: f64 = rows.last().unwrap()[5].parse().unwrap();
    assert!((last / (2f64.ln().powi(2)) - 1.0).abs() < 0.03);

    let recs: Vec<EquidistRecord> =
        serde_json::from_str(&stdout(&["equidist", "lehmer", "--primes", "3:20"])).unwrap();
    assert_eq!(recs.iter().map(|r| r.index).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13, 17, 19]);
}

#[test]
fn discrepancy_and_arithmetic() {
    let s = stdout(&[
        "equidist", "discrepancy", "--family", "cyclotomic", "--n", "3:100", "--target", "circle:1", "--out", "csv",
    ]);
    assert_eq!(s.lines().count(), 99);
    assert!(s.lines().skip(1).all(|l| l.split(',').count() == 3));
    let a: serde_json::Value = serde_json::from_str(&stdout(&["equidist", "arithmetic", "--r", "1.7"])).unwrap();
    assert_eq!(a["arithmetic"], true);
    let b: serde_json::Value = serde_json::from_str(&stdout(&["arithmetic-check", "--r", "1.6"])).unwrap();
    assert_eq!(b["arithmetic"], false);
    assert!(b["limit"].is_null());
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["height", "--poly", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--radii", "inf:1,2:0.5", "--profiles"][..],
        &["pairing", "--left", "areal:1.3", "--right", "circle:0.8", "--nodes", "4096"],
        &["pairing", "--radii", "inf:2,3:0.7", "--t", "inf:3,3:0.3333333333333333", "--assemble"],
        &["equidist", "discrepancy", "--n", "1:40", "--out", "csv"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn twelve_significant_digits() {
    let s = stdout(&["mahler", "--poly", "1,1,0,-1,-1,-1,-1,-1,0,1,1", "--out", "plain"]);
    assert_eq!(s.trim(), "0.162357612008");
}

#[test]
fn nodes_from_environment() {
    let base = ["pairing", "--left", "areal:1", "--right", "circle:1"];
    let out = Command::new(env!("CARGO_BIN_EXE_areal-heights"))
        .args(base)
        .env("AREAL_HEIGHTS_NODES", "1024")
        .output()
        .unwrap();
    let p: PairingResult = serde_json::from_slice(&out.stdout).unwrap();
    let json = serde_json::to_value(p.method).unwrap();
    assert_eq!(json["nodes"], 1024);
    let out = Command::new(env!("CARGO_BIN_EXE_areal-heights"))
        .args(base)
        .env("AREAL_HEIGHTS_NODES", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["height", "--poly", "1,2,1", "--radii", "inf:1"][..],
        &["height", "--poly", "-2,1", "--radii", "inf:0"],
        &["kronecker", "--alpha", "0", "--radii", "inf:1"],
        &["pairing", "--radii", "inf:1", "--t", "inf:2"],
        &["pairing", "--left", "areal:1", "--right", "circle:1", "--nodes", "48"],
        &["equidist", "lehmer", "--alpha", "2", "--primes", "3:7"],
        &["mahler", "--poly", "0"],
        &["no-such-command"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn force_averages_over_roots() {
    let s = stdout(&["height", "--poly", "1,2,1", "--radii", "inf:1", "--force", "--out", "plain"]);
    assert!(s.contains("total: 0.125"));
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("areal-heights-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let out = run(&["mahler", "--poly", "-2,0,1", "--out", "csv", "--out-file", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "value\n0.69314718056\n");
    std::fs::remove_dir_all(dir).unwrap();
}
