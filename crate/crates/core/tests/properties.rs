mod common;

use std::f64::consts::LN_2;

use areal_heights::equidist::{empirical_discrepancy, lehmer_failure_sequence, roots_of_unity};
use areal_heights::heights::{areal_h_infinity, lambda_h_infinity, normalizing_scale};
use areal_heights::measures::f_r_derivative;
use areal_heights::pairings::{az_assembled, az_pairing, DEFAULT_NODES};
use areal_heights::polyalg::{complex_roots, newton_polygon, squarefree_part};
use areal_heights::quadrature::midpoint_split;
use areal_heights::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

use common::*;

const TOL: f64 = DEFAULT_ROOT_TOL;

fn nonzero_ends(mut c: Vec<i64>) -> Vec<i64> {
    let n = c.len() - 1;
    if c[0] == 0 {
        c[0] = 1;
    }
    if c[n] == 0 {
        c[n] = -1;
    }
    c
}

fn p_valuation(a: i64, p: i64) -> i64 {
    let (mut a, mut v) = (a.abs(), 0);
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

proptest! {
    #[test]
    fn newton_slopes_telescope(c in prop::collection::vec(-2000i64..=2000, 2..12), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let c = nonzero_ends(c);
        let poly = IntPolynomial::from_i64s(&c);
        let np = newton_polygon(&poly, p).unwrap();
        let n = c.len() - 1;
        let root_sum = np
            .root_valuations()
            .iter()
            .fold(Ratio::<i64>::zero(), |acc, &(v, m)| acc + v * Ratio::from_integer(m as i64));
        let expected = p_valuation(c[0], p as i64) - p_valuation(c[n], p as i64);
        prop_assert_eq!(root_sum, Ratio::from_integer(expected));
        prop_assert_eq!(np.total_rise(), Ratio::from_integer(-expected));
    }

    #[test]
    fn roots_reconstruct_polynomial(c in prop::collection::vec(-1_000_000i64..=1_000_000, 2..=31)) {
        let c = nonzero_ends(c);
        let poly = IntPolynomial::from_i64s(&c);
        let roots = complex_roots(&poly, TOL).unwrap();
        let n = c.len() - 1;
        prop_assert_eq!(roots.len(), n);
        let lead = c[n] as f64;
        // a_n ∏ (x − z_k) and its modulus majorant a_n ∏ (x + |z_k|)
        let mut prod = vec![Complex64::new(lead, 0.0)];
        let mut major = vec![lead.abs()];
        for z in &roots {
            let mut next = vec![Complex64::zero(); prod.len() + 1];
            let mut next_major = vec![0.0; prod.len() + 1];
            for (i, a) in prod.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * z;
                next_major[i + 1] += major[i];
                next_major[i] += major[i] * z.norm();
            }
            prod = next;
            major = next_major;
        }
        for i in 0..=n {
            let err = (prod[i] - c[i] as f64).norm();
            prop_assert!(err <= 10.0 * TOL * major[i], "coefficient {}: error {} vs scale {}", i, err, major[i]);
        }
    }

    #[test]
    fn profile_weights_sum_to_one(c in prop::collection::vec(-50i64..=50, 2..=13)) {
        let c = nonzero_ends(c);
        let sqf = squarefree_part(&IntPolynomial::from_i64s(&c)).unwrap();
        let alpha = AlgebraicNumber::forced(&sqf).unwrap();
        if let Ok(profiles) = local_profiles(&alpha, TOL) {
            for prof in profiles.values() {
                prop_assert_eq!(prof.weight_sum(), Ratio::from_integer(1));
            }
        }
    }

    #[test]
    fn f_r_derivative_matches_differences(r in 0.05f64..10.0, x in 0.0f64..20.0) {
        let h = 1e-6 * x.max(1e-2);
        let fd = (f_r(r, x + h) - f_r(r, (x - h).max(0.0))) / (x + h - (x - h).max(0.0));
        let d = f_r_derivative(r, x);
        prop_assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0), "{} vs {}", fd, d);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d == 0.0, x == 0.0);
    }

    #[test]
    fn f_r_strictly_increasing(r in 0.05f64..10.0, x in 0.0f64..20.0, dx in 1e-3f64..5.0) {
        prop_assert!(f_r(r, x + dx) > f_r(r, x));
    }

    #[test]
    fn f_r_dominates_log(r in 0.05f64..10.0, x in 1e-6f64..20.0) {
        let d = f_r(r, x) - x.ln();
        prop_assert!(d >= -1e-12);
        if x >= r {
            prop_assert!(d.abs() < 1e-12);
        }
    }
}

#[test]
fn areal_energy_by_polar_quadrature() {
    for big_r in [0.5, 1.0, 2.0] {
        let rho = MeasureSpec::areal(big_r).unwrap();
        let angles = 16;
        let ring = |s: f64| {
            (0..angles)
                .map(|k| rho.potential(Complex64::from_polar(s, (k as f64 + 0.5) / angles as f64 * std::f64::consts::TAU)))
                .sum::<f64>()
                / angles as f64
        };
        // density 2s/R² ds on [0, R]
        let integral = midpoint_split(|s| ring(s) * 2.0 * s / (big_r * big_r), 0.0, big_r, &[], 1 << 14);
        let expected = 0.25 - big_r.ln();
        assert!((-integral - expected).abs() < 1e-8, "R = {big_r}: {} vs {expected}", -integral);
        assert!((rho.energy().unwrap() - expected).abs() < 1e-15);
    }
}

#[test]
fn areal_height_is_normalized_areal_mahler_measure() {
    let mut rng = rng(20);
    let r = profile("inf:1");
    for _ in 0..300 {
        let p = random_polynomial(&mut rng);
        let sqf = squarefree_part(&p).unwrap();
        let alpha = AlgebraicNumber::forced(&sqf).unwrap();
        let n = sqf.degree().unwrap() as f64;
        let h = areal_height(&alpha, &r, TOL).unwrap().total;
        let md = areal_mahler_measure(&sqf, TOL).unwrap();
        assert!((n * (h - 0.125) - md).abs() < 1e-10, "{sqf}: {h} vs {md}");
    }
}

#[test]
fn zero_and_infinity_are_isolated() {
    let places = ["inf", "2", "3", "5"];
    let radii = [0.2, 0.5, 1.0, 0.5f64.exp(), 2.0, 3.0, 7.5];
    for (i, a) in places.iter().enumerate() {
        for b in places.iter().skip(i) {
            for &ra in &radii {
                for &rb in &radii {
                    let text = if a == b { format!("{a}:{ra}") } else { format!("{a}:{ra},{b}:{rb}") };
                    let r = profile(&text);
                    let l = essential_minimum(&r).unwrap();
                    let h0 = areal_height(&AlgebraicNumber::Zero, &r, TOL).unwrap().total;
                    assert!(h0 < l, "{text}: h(0) = {h0}, L = {l}");
                    if r.log_gamma() > 1e-12 {
                        assert!(areal_h_infinity(&r) < l, "{text}: h(inf) >= L");
                    }
                }
            }
        }
    }
}

fn random_normalized(rng: &mut impl Rng) -> RadiusProfile {
    let t = random_profile(rng);
    t.scaled(normalizing_scale(&t)).unwrap()
}

#[test]
fn closed_form_matches_quadrature_assembly() {
    let mut rng = rng(21);
    for _ in 0..20 {
        let r = random_profile(&mut rng);
        let t = random_normalized(&mut rng);
        let closed = az_closed_form(&r, &t).unwrap().value;
        let assembled = az_assembled(&r, &t, DEFAULT_NODES).unwrap();
        assert!((closed - assembled.value).abs() < 1e-7, "{r} vs {t}: {closed} vs {}", assembled.value);
    }
}

#[test]
fn pairing_is_a_squared_distance() {
    let mut rng = rng(22);
    for _ in 0..500 {
        let r = random_profile(&mut rng);
        let t = random_normalized(&mut rng);
        let az = az_closed_form(&r, &t).unwrap();
        assert!(az.value > 0.0, "{r} vs {t}: {}", az.value);
        assert!(az.breakdown.iter().all(|c| c.contribution >= -1e-15));
    }
    for t in [0.5, 1.0, 3.0] {
        let c = MeasureSpec::circle(t).unwrap();
        assert_eq!(az_pairing(&c, &c, DEFAULT_NODES).unwrap().value, 0.0);
    }
}

#[test]
fn roots_of_unity_sit_at_the_pairing_value() {
    let mut rng = rng(23);
    let primes = [3usize, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    for _ in 0..20 {
        let r = random_profile(&mut rng);
        let expected = az_closed_form(&r, &profile("inf:1")).unwrap().value;
        for &n in &primes {
            let zeta = AlgebraicNumber::from_minimal_polynomial(&IntPolynomial::cyclotomic(n).unwrap()).unwrap();
            let h = areal_height(&zeta, &r, TOL).unwrap().total;
            assert!((h - expected).abs() < 1e-12, "{r}, N = {n}: {h} vs {expected}");
        }
    }
}

#[test]
fn chebyshev_derivative_sign_pattern() {
    for k in 1..1000 {
        let r = 0.1 + 1.9 * k as f64 / 1000.0;
        assert!(az_chebyshev_derivative(r).unwrap() < 0.0, "r = {r}");
        let r = 2.0 + 8.0 * k as f64 / 1000.0;
        assert!(az_chebyshev_derivative(r).unwrap() > 0.0, "r = {r}");
    }
    assert!(az_chebyshev_derivative(2.0).unwrap().abs() < 1e-12);
}

#[test]
fn chebyshev_derivative_matches_differences() {
    for r in [0.3, 0.7, 1.0, 1.5, 2.5, 4.0] {
        let h = 1e-5;
        let plus = az_chebyshev(r + h, DEFAULT_NODES).unwrap().value;
        let minus = az_chebyshev(r - h, DEFAULT_NODES).unwrap().value;
        let fd = (plus - minus) / (2.0 * h);
        let d = az_chebyshev_derivative(r).unwrap();
        assert!((fd - d).abs() < 1e-4, "r = {r}: {fd} vs {d}");
    }
}

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi)
        .filter(|&n| n > 1 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

#[test]
fn lehmer_gap_decays_like_inverse_square() {
    let half = (BigInt::from(1), BigInt::from(2));
    let recs = lehmer_failure_sequence(&half.0, &half.1, &primes_between(11, 499), &profile("inf:1")).unwrap();
    for w in recs.windows(2) {
        assert!(w[1].scaled_gap < w[0].scaled_gap, "p = {}", w[1].index);
    }
    let l2 = LN_2 * LN_2;
    for rec in recs.iter().filter(|rec| rec.index >= 101) {
        let p = rec.index as f64;
        let v = p * p * rec.gap;
        assert!((0.97 * l2..=l2).contains(&v), "p = {}: {v}", rec.index);
    }
}

#[test]
fn roots_of_unity_discrepancy_is_small() {
    let circle = MeasureSpec::circle(1.0).unwrap();
    for n in 1..=200u64 {
        let w = 1.0 / n as f64;
        let points: Vec<(Complex64, f64)> = roots_of_unity(n, false).into_iter().map(|z| (z, w)).collect();
        let d = empirical_discrepancy(&points, &circle).unwrap();
        assert!(d <= 16.0 / n as f64 + 1e-12, "N = {n}: {d}");
    }
}

#[test]
fn small_disk_heights_of_roots_of_unity_equal_h_infinity() {
    let r = profile("inf:0.5");
    let t = profile("inf:1");
    let expected = az_closed_form(&r, &t).unwrap().value;
    assert_eq!(expected, areal_h_infinity(&r));
    for n in 1..=60 {
        let zeta = AlgebraicNumber::from_minimal_polynomial(&IntPolynomial::cyclotomic(n).unwrap()).unwrap();
        assert!(lambda_height(&zeta, &t, TOL).unwrap().total.abs() < 1e-15);
        let h = areal_height(&zeta, &r, TOL).unwrap().total;
        assert!((h - expected).abs() < 1e-12, "N = {n}: {h}");
    }
    assert_eq!(lambda_h_infinity(&t), 0.0);
}

#[test]
fn kronecker_verdict_agrees_with_height() {
    let mut rng = rng(24);
    for _ in 0..1000 {
        let (_, alpha) = random_number(&mut rng);
        let r = loop {
            let r = random_profile(&mut rng);
            if r.log_gamma() <= 0.0 {
                break r;
            }
        };
        let h = areal_height(&alpha, &r, TOL).unwrap().total;
        let v = kronecker_classify(&alpha, &r, TOL).unwrap();
        assert_eq!(v.attains_minimum, (h - v.essential_minimum).abs() <= 1e-10, "{alpha} at {r}: {h}");
    }
    for (c, r) in [(&[1i64, 1, 1][..], "inf:1"), (&[-2, 1], "inf:2,2:0.5"), (&[1, 0, 1], "inf:0.5,3:0.7")] {
        let alpha = number(c);
        let r = profile(r);
        let h = areal_height(&alpha, &r, TOL).unwrap().total;
        let v = kronecker_classify(&alpha, &r, TOL).unwrap();
        assert!(v.attains_minimum && (h - v.essential_minimum).abs() < 1e-12);
    }
}

#[test]
fn product_formula_on_irreducible_inputs() {
    for c in [&[-1i64, -1, 1][..], &[-2, 0, 1], &[3, 0, 0, 0, 0, 7], &[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 12]] {
        let alpha = number(c);
        let s = areal_heights::places::product_formula_sum(&local_profiles(&alpha, TOL).unwrap());
        assert!(s.abs() < 1e-10, "{c:?}: {s}");
    }
    let big = IntPolynomial::new(vec![BigInt::from(-2), BigInt::from(0), BigInt::from(10).pow(30)]);
    let alpha = AlgebraicNumber::from_minimal_polynomial(&big).unwrap();
    let s = areal_heights::places::product_formula_sum(&local_profiles(&alpha, TOL).unwrap());
    assert!(s.abs() < 1e-10, "{s}");
}
