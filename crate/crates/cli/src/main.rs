//! `areal-heights`: heights, Mahler measures and pairings from the command line.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use areal_heights::equidist::{
    arithmetic_measure_check, empirical_discrepancy, lehmer_failure_sequence, limiting_height_for_uniform,
    roots_of_unity,
};
use areal_heights::heights::gamma_regime;
use areal_heights::pairings::{az_assembled, az_pairing};
use areal_heights::places::profiles_to_json;
use areal_heights::*;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Config, Format, NODES_ENV};
use output::{num, Report};

#[derive(Parser, Debug)]
#[command(name = "areal-heights", version, about = "Areal Weil heights, Mahler measures and Arakelov-Zhang pairings over Q")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    out: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out_file: Option<PathBuf>,
    /// Quadrature nodes (power of two, at least 16). Overrides AREAL_HEIGHTS_NODES.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Backward-error tolerance of the complex root solver.
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct NumberArgs {
    /// Ascending integer coefficients of the minimal polynomial, e.g. "-1,-1,1".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha", required_unless_present = "alpha")]
    poly: Option<String>,
    /// A rational "p/q", an integer, or "inf".
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Accept any polynomial and use the degree-weighted average over its distinct roots.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug, Clone)]
struct PolyArg {
    /// Ascending integer coefficients, e.g. "-1,-1,1".
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Areal height h_{rho_r}, or the Weil height when --radii is omitted.
    Height {
        #[command(flatten)]
        number: NumberArgs,
        /// Radius profile such as "inf:1,2:0.5".
        #[arg(long)]
        radii: Option<String>,
        /// Also print the local absolute-value profiles.
        #[arg(long)]
        profiles: bool,
    },
    /// Mahler measure m(P).
    Mahler(PolyArg),
    /// Areal Mahler measure m_D(P).
    ArealMahler(PolyArg),
    /// Circle-family height h_{lambda_t}.
    LambdaHeight {
        #[command(flatten)]
        number: NumberArgs,
        #[arg(long)]
        radii: String,
    },
    /// Arakelov-Zhang pairing of two measures at infinity, or AZ(rho_r, lambda_t).
    Pairing {
        /// areal:R, circle:t, chebyshev or points:FILE.
        #[arg(long, requires = "right", conflicts_with_all = ["radii", "t"])]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
        /// Radius profile r of rho_r.
        #[arg(long, requires = "t")]
        radii: Option<String>,
        /// Radius profile t of lambda_t with gamma(t) = 1.
        #[arg(long, requires = "radii")]
        t: Option<String>,
        /// Sum the local terms with quadrature at infinity instead of the closed form.
        #[arg(long, requires = "radii")]
        assemble: bool,
    },
    /// Minimize r -> AZ(rho_r, target) over an interval.
    OptimizeRadius {
        /// circle:1 or chebyshev.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0.1)]
        lo: f64,
        #[arg(long, default_value_t = 10.0)]
        hi: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Decide whether alpha attains the essential minimum, with a certificate.
    Kronecker {
        #[command(flatten)]
        number: NumberArgs,
        #[arg(long)]
        radii: String,
    },
    /// Essential minimum L(rho_r).
    EssentialMin {
        #[arg(long)]
        radii: String,
    },
    /// Equidistribution experiments.
    Equidist {
        #[command(subcommand)]
        experiment: Experiment,
    },
    /// Whether the area measure of radius r is arithmetic.
    ArithmeticCheck {
        #[arg(long)]
        r: f64,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Heights of the p-th roots of a rational base.
    Lehmer {
        #[arg(long, default_value = "1/2")]
        alpha: String,
        /// Inclusive prime range "lo:hi".
        #[arg(long)]
        primes: String,
        #[arg(long, default_value = "inf:1")]
        radii: String,
    },
    /// Discrepancy of roots of unity against a radial measure.
    Discrepancy {
        /// cyclotomic (primitive roots) or roots-of-unity (all N-th roots).
        #[arg(long, default_value = "cyclotomic")]
        family: String,
        /// Inclusive range "lo:hi".
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "circle:1")]
        target: String,
    },
    /// Arithmetic check and the limiting height of uniform sequences.
    Arithmetic {
        #[arg(long)]
        r: f64,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_number(args: &NumberArgs) -> Result<AlgebraicNumber> {
    match (&args.poly, &args.alpha) {
        (Some(p), _) => {
            let p: IntPolynomial = p.parse()?;
            if args.force {
                AlgebraicNumber::forced(&p)
            } else {
                AlgebraicNumber::from_minimal_polynomial(&p).map_err(|e| match e {
                    Error::InvalidInput(m) => invalid(format!("{m} (pass --force to average over the roots)")),
                    other => other,
                })
            }
        }
        (None, Some(a)) => a.parse(),
        (None, None) => Err(invalid("one of --poly or --alpha is required")),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| invalid(format!("expected a range lo:hi, got {s:?}")))?;
    let lo: u64 = a.trim().parse().map_err(|_| invalid(format!("bad range start {a:?}")))?;
    let hi: u64 = b.trim().parse().map_err(|_| invalid(format!("bad range end {b:?}")))?;
    if lo > hi {
        return Err(invalid(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

fn is_prime(n: u64) -> bool {
    n > 1 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn parse_measure(s: &str) -> Result<MeasureSpec> {
    match s.strip_prefix("points:") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {path}: {e}")))?;
            MeasureSpec::points_from_csv(&text)
        }
        None => s.parse(),
    }
}

#[derive(Serialize)]
struct Value {
    value: f64,
}

#[derive(Serialize)]
struct EssentialMin {
    value: f64,
    gamma: f64,
    regime: heights::GammaRegime,
}

#[derive(Serialize)]
struct HeightWithProfiles {
    #[serde(flatten)]
    report: HeightReport,
    profiles: serde_json::Value,
}

#[derive(Serialize)]
struct DiscrepancyRow {
    n: u64,
    points: usize,
    discrepancy: f64,
}

#[derive(Serialize)]
struct Arithmetic {
    r: f64,
    arithmetic: bool,
    certificate: f64,
    limit: Option<f64>,
    exceeds_essential_min: Option<bool>,
}

fn scalar(value: f64) -> Report {
    Report::new(&Value { value }, vec!["value"], vec![vec![num(value)]], num(value))
}

fn height_report(h: &HeightReport, extra: Option<serde_json::Value>) -> Report {
    let mut rows = vec![vec!["h_infinity".to_string(), num(h.h_infinity)]];
    rows.extend(h.per_place.iter().map(|c| vec![c.place.to_string(), num(c.contribution)]));
    rows.push(vec!["total".into(), num(h.total)]);
    let plain = rows.iter().map(|r| format!("{}: {}", r[0], r[1])).collect::<Vec<_>>().join("\n");
    match extra {
        Some(profiles) => Report::new(
            &HeightWithProfiles {
                report: h.clone(),
                profiles,
            },
            vec!["place", "contribution"],
            rows,
            plain,
        ),
        None => Report::new(h, vec!["place", "contribution"], rows, plain),
    }
}

fn pairing_report(p: &PairingResult) -> Report {
    let method = serde_json::to_value(p.method).unwrap();
    let kind = method["kind"].as_str().unwrap_or_default().to_string();
    let row = vec![
        kind.clone(),
        num(p.value),
        num(p.error_estimate),
        p.closed_form.map(num).unwrap_or_default(),
    ];
    let plain = format!("{} ({kind}, error estimate {})", num(p.value), num(p.error_estimate));
    Report::new(p, vec!["method", "value", "error_estimate", "closed_form"], vec![row], plain)
}

fn run(cli: &Cli, cfg: &Config) -> Result<Report> {
    let tol = cfg.root_tol;
    match &cli.command {
        Command::Height { number, radii, profiles } => {
            let alpha = parse_number(number)?;
            let h = match radii {
                Some(r) => areal_height(&alpha, &r.parse()?, tol)?,
                None => weil_height(&alpha, tol)?,
            };
            let extra = if *profiles {
                Some(profiles_to_json(&local_profiles(&alpha, tol)?))
            } else {
                None
            };
            Ok(height_report(&h, extra))
        }
        Command::Mahler(p) => Ok(scalar(mahler_measure(&p.poly.parse()?, tol)?)),
        Command::ArealMahler(p) => Ok(scalar(areal_mahler_measure(&p.poly.parse()?, tol)?)),
        Command::LambdaHeight { number, radii } => {
            let alpha = parse_number(number)?;
            Ok(height_report(&lambda_height(&alpha, &radii.parse()?, tol)?, None))
        }
        Command::Pairing {
            left,
            right,
            radii,
            t,
            assemble,
        } => {
            let result = match (left, right, radii, t) {
                (Some(l), Some(r), _, _) => az_pairing(&parse_measure(l)?, &parse_measure(r)?, cfg.quadrature_nodes)?,
                (_, _, Some(r), Some(t)) => {
                    let (r, t): (RadiusProfile, RadiusProfile) = (r.parse()?, t.parse()?);
                    if *assemble {
                        az_assembled(&r, &t, cfg.quadrature_nodes)?
                    } else {
                        az_closed_form(&r, &t)?
                    }
                }
                _ => return Err(invalid("pass --left and --right, or --radii and --t")),
            };
            Ok(pairing_report(&result))
        }
        Command::OptimizeRadius { target, lo, hi, tol } => {
            let opt = optimize_radius(&parse_measure(target)?, *lo, *hi, *tol)?;
            let row = vec![num(opt.r_star), num(opt.value), opt.boundary.to_string()];
            let plain = format!(
                "r_star = {}, value = {}{}",
                num(opt.r_star),
                num(opt.value),
                if opt.boundary { " (boundary)" } else { "" }
            );
            Ok(Report::new(&opt, vec!["r_star", "value", "boundary"], vec![row], plain))
        }
        Command::Kronecker { number, radii } => {
            let alpha = parse_number(number)?;
            let v = kronecker_classify(&alpha, &radii.parse()?, tol)?;
            let rows: Vec<Vec<String>> = v
                .certificate
                .iter()
                .map(|c| {
                    let rel = serde_json::to_value(c.relation).unwrap();
                    vec![
                        c.place.to_string(),
                        num(c.value),
                        rel.as_str().unwrap().to_string(),
                        num(c.bound),
                        c.satisfied.to_string(),
                    ]
                })
                .collect();
            let mut plain = format!(
                "attains minimum: {} (L = {})",
                v.attains_minimum,
                num(v.essential_minimum)
            );
            for r in &rows {
                plain.push_str(&format!("\n  |alpha|_{} = {} {} {}: {}", r[0], r[1], r[2], r[3], r[4]));
            }
            Ok(Report::new(&v, vec!["place", "value", "relation", "bound", "satisfied"], rows, plain))
        }
        Command::EssentialMin { radii } => {
            let r: RadiusProfile = radii.parse()?;
            let value = essential_minimum(&r)?;
            let data = EssentialMin {
                value,
                gamma: gamma(&r),
                regime: gamma_regime(&r),
            };
            let regime = serde_json::to_value(data.regime).unwrap();
            let row = vec![num(value), num(data.gamma), regime.as_str().unwrap().to_string()];
            Ok(Report::new(&data, vec!["value", "gamma", "regime"], vec![row], num(value)))
        }
        Command::Equidist { experiment } => run_experiment(experiment),
        Command::ArithmeticCheck { r } => arithmetic(*r),
    }
}

fn arithmetic(r: f64) -> Result<Report> {
    let check = arithmetic_measure_check(r)?;
    let limit = limiting_height_for_uniform(r)?;
    let data = Arithmetic {
        r,
        arithmetic: check.arithmetic,
        certificate: check.certificate,
        limit: limit.limit,
        exceeds_essential_min: limit.exceeds_essential_min,
    };
    let row = vec![
        num(r),
        data.arithmetic.to_string(),
        num(data.certificate),
        data.limit.map(num).unwrap_or_default(),
        data.exceeds_essential_min.map(|b| b.to_string()).unwrap_or_default(),
    ];
    let plain = format!(
        "arithmetic: {} (log r - 1/2 = {})",
        data.arithmetic,
        num(data.certificate)
    );
    Ok(Report::new(
        &data,
        vec!["r", "arithmetic", "certificate", "limit", "exceeds_essential_min"],
        vec![row],
        plain,
    ))
}

fn run_experiment(experiment: &Experiment) -> Result<Report> {
    match experiment {
        Experiment::Lehmer { alpha, primes, radii } => {
            let base: AlgebraicNumber = alpha.parse()?;
            let p = match &base {
                AlgebraicNumber::Roots(p) if p.degree() == Some(1) => p.clone(),
                _ => return Err(invalid(format!("--alpha must be a nonzero rational, got {alpha}"))),
            };
            // the base is the root of q x − p
            let (num_, den) = (-p.coeff(0), p.coeff(1));
            let (lo, hi) = parse_range(primes)?;
            let ps: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
            if ps.is_empty() {
                return Err(invalid(format!("no primes in {primes}")));
            }
            let recs = lehmer_failure_sequence(&num_, &den, &ps, &radii.parse()?)?;
            let rows = recs
                .iter()
                .map(|r| {
                    let p = r.index as f64;
                    vec![
                        r.index.to_string(),
                        r.degree.to_string(),
                        num(r.height),
                        num(r.gap),
                        num(r.scaled_gap),
                        num(p * p * r.gap),
                    ]
                })
                .collect::<Vec<_>>();
            let plain = rows.iter().map(|r| r.join("\t")).collect::<Vec<_>>().join("\n");
            Ok(Report::new(
                &recs,
                vec!["p", "degree", "height", "gap", "scaled_gap", "p2_gap"],
                rows,
                plain,
            ))
        }
        Experiment::Discrepancy { family, n, target } => {
            let primitive = match family.as_str() {
                "cyclotomic" => true,
                "roots-of-unity" => false,
                other => return Err(invalid(format!("unknown family {other:?}"))),
            };
            let target = parse_measure(target)?;
            let (lo, hi) = parse_range(n)?;
            let data = (lo.max(1)..=hi)
                .map(|k| {
                    let roots = roots_of_unity(k, primitive);
                    let w = 1.0 / roots.len() as f64;
                    let pts: Vec<_> = roots.into_iter().map(|z| (z, w)).collect();
                    Ok(DiscrepancyRow {
                        n: k,
                        points: pts.len(),
                        discrepancy: empirical_discrepancy(&pts, &target)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = data
                .iter()
                .map(|d| vec![d.n.to_string(), d.points.to_string(), num(d.discrepancy)])
                .collect::<Vec<_>>();
            let plain = rows.iter().map(|r| r.join("\t")).collect::<Vec<_>>().join("\n");
            Ok(Report::new(&data, vec!["n", "points", "discrepancy"], rows, plain))
        }
        Experiment::Arithmetic { r } => arithmetic(*r),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numeric() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match Config::resolve(cli.nodes, std::env::var(NODES_ENV).ok(), cli.root_tol, cli.out) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cli, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = report.render(cfg.output);
    match &cli.out_file {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
