//! Equidistribution and Lehmer-type experiments.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{areal_h_infinity, essential_minimum};
use crate::measures::{f_r, MeasureSpec, RadiusProfile};
use crate::pairings::az_closed_form;
use crate::places::Place;
use crate::polyalg::{is_prime, newton::valuation};
use crate::quadrature::neumaier_sum;

const SECTORS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquidistRecord {
    pub index: u64,
    pub degree: usize,
    pub height: f64,
    /// Height minus the essential minimum.
    pub gap: f64,
    /// `degree · gap`.
    pub scaled_gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
}

/// `log |a/b|_v` for a nonzero rational.
fn log_abs_at(num: &BigInt, den: &BigInt, place: Place) -> f64 {
    match place {
        Place::Infinity => {
            let big_ln = |x: &BigInt| {
                let bits = x.bits();
                let shift = bits.saturating_sub(64);
                (x.abs() >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
            };
            big_ln(num) - big_ln(den)
        }
        Place::Finite(p) => (valuation(den, p) - valuation(num, p)) as f64 * (p as f64).ln(),
    }
}

fn primes_of(x: &BigInt) -> Result<Vec<u64>> {
    crate::polyalg::prime_divisors(x)
}

/// Records for `α_p = base^{1/p}`, the roots of `b x^p − a` for `base = a/b`.
///
/// Every conjugate of `α_p` has `|α_p|_v = |base|_v^{1/p}` at every place,
/// so each local profile is a single value of weight one and the height is
/// exact: `h(∞) + Σ_S f_{r_v}(|base|_v^{1/p}) + (1/p) Σ_{v∉S} log⁺|base|_v`.
/// The discrepancy column compares the conjugates with the unit circle.
pub fn lehmer_failure_sequence(
    num: &BigInt,
    den: &BigInt,
    primes: &[u64],
    r: &RadiusProfile,
) -> Result<Vec<EquidistRecord>> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::Domain("base must be a nonzero rational".into()));
    }
    let g = num.gcd(den);
    let (num, den) = (num / &g, den / &g);
    for (place, _) in r.iter() {
        if log_abs_at(&num, &den, *place) >= 0.0 {
            return Err(Error::Domain(format!("|base|_{place} must be < 1 on every place of S")));
        }
    }
    let mut places: Vec<Place> = vec![Place::Infinity];
    places.extend(primes_of(&num)?.into_iter().map(Place::Finite));
    places.extend(primes_of(&den)?.into_iter().map(Place::Finite));
    places.extend(r.places().copied());
    places.sort_unstable();
    places.dedup();
    let logs: Vec<(Place, f64)> = places.iter().map(|&v| (v, log_abs_at(&num, &den, v))).collect();

    let h_inf = areal_h_infinity(r);
    let minimum = essential_minimum(r)?;
    let arg = if num.is_negative() != den.is_negative() { PI } else { 0.0 };
    let target = MeasureSpec::Circle(1.0);

    primes
        .iter()
        .map(|&p| {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            let pf = p as f64;
            let local = logs.iter().map(|&(v, l)| match r.get(&v) {
                Some(rv) => f_r(rv, (l / pf).exp()),
                None => l.max(0.0) / pf,
            });
            let height = h_inf + neumaier_sum(local);
            let gap = height - minimum;
            let modulus = (logs[0].1 / pf).exp();
            let roots: Vec<Complex64> = (0..p)
                .map(|k| Complex64::from_polar(modulus, (arg + 2.0 * PI * k as f64) / pf))
                .collect();
            let w = 1.0 / pf;
            let points: Vec<(Complex64, f64)> = roots.into_iter().map(|z| (z, w)).collect();
            Ok(EquidistRecord {
                index: p,
                degree: p as usize,
                height,
                gap,
                scaled_gap: pf * gap,
                discrepancy: Some(empirical_discrepancy(&points, &target)?),
            })
        })
        .collect()
}

/// Diagnostic distance between a weighted point set and a rotation-invariant
/// target: the larger of a radial distance and the worst deviation of the
/// mass in 16 equal angular sectors from 1/16.
///
/// The radial distance is Kolmogorov–Smirnov against a disk. A circle has a
/// step radial law, under which KS stays at 1 for points converging from
/// inside, so circles use the Lévy distance instead.
pub fn empirical_discrepancy(points: &[(Complex64, f64)], target: &MeasureSpec) -> Result<f64> {
    if !target.is_radial() {
        return Err(Error::UnsupportedMeasure(format!("discrepancy against {target}")));
    }
    let total: f64 = points.iter().map(|(_, w)| w).sum();
    if points.is_empty() || (total - 1.0).abs() > 1e-9 || points.iter().any(|(_, w)| *w < 0.0) {
        return Err(Error::invalid("point weights must be nonnegative and sum to 1"));
    }
    let radial = match target {
        MeasureSpec::Circle(_) => radial_levy(points, target),
        _ => radial_ks(points, target),
    };
    Ok(radial.max(angular_imbalance(points)))
}

/// Sorted radii with the empirical CDF value after each distinct radius.
fn radial_steps(points: &[(Complex64, f64)]) -> Vec<(f64, f64)> {
    let mut radii: Vec<(f64, f64)> = points.iter().map(|(z, w)| (z.norm(), *w)).collect();
    radii.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut steps: Vec<(f64, f64)> = Vec::new();
    let mut acc = 0.0;
    for (x, w) in radii {
        acc += w;
        match steps.last_mut() {
            Some(last) if last.0 == x => last.1 = acc,
            _ => steps.push((x, acc)),
        }
    }
    steps
}

/// Sup distance between the empirical radial CDF and a continuous one.
fn radial_ks(points: &[(Complex64, f64)], target: &MeasureSpec) -> f64 {
    let mut prev = 0.0;
    let mut worst: f64 = 0.0;
    for (x, f) in radial_steps(points) {
        let g = target.radial_cdf(x).unwrap();
        worst = worst.max((f - g).abs()).max((prev - g).abs());
        prev = f;
    }
    worst
}

fn radial_levy(points: &[(Complex64, f64)], target: &MeasureSpec) -> f64 {
    // breakpoints x_i with the empirical CDF value F_i on [x_i, x_{i+1})
    let steps = radial_steps(points);
    let cdf = |s: f64| target.radial_cdf(s.max(0.0)).unwrap();
    let cdf_left = |s: f64| match target {
        MeasureSpec::Circle(t) => {
            if s <= *t {
                0.0
            } else {
                1.0
            }
        }
        _ => cdf(s),
    };
    let within = |eps: f64| {
        let mut prev = 0.0;
        for &(x, f) in &steps {
            if f - cdf(x + eps) > eps || cdf_left(x - eps) - prev > eps {
                return false;
            }
            prev = f;
        }
        true
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if within(0.0) {
        return 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if within(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn angular_imbalance(points: &[(Complex64, f64)]) -> f64 {
    let mut mass = [0.0f64; SECTORS];
    for (z, w) in points {
        let theta = z.im.atan2(z.re).rem_euclid(2.0 * PI);
        let k = ((theta / (2.0 * PI) * SECTORS as f64) as usize).min(SECTORS - 1);
        mass[k] += w;
    }
    mass.iter()
        .map(|m| (m - 1.0 / SECTORS as f64).abs())
        .fold(0.0, f64::max)
}

/// All `n`-th roots of unity, or only the primitive ones (the roots of Φ_n).
pub fn roots_of_unity(n: u64, primitive_only: bool) -> Vec<Complex64> {
    (0..n)
        .filter(|&k| !primitive_only || k.gcd(&n) == 1)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticCheck {
    pub arithmetic: bool,
    /// `f_r(0) = log r − 1/2`, the minimum of the potential.
    pub certificate: f64,
}

/// Whether the area measure on the disk of radius `r` is a limit of conjugate
/// sets of algebraic integers, which happens exactly for `r ≥ e^{1/2}`.
pub fn arithmetic_measure_check(r: f64) -> Result<ArithmeticCheck> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(ArithmeticCheck {
        arithmetic: r >= 0.5f64.exp(),
        certificate: f_r(r, 0.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformLimit {
    pub arithmetic: bool,
    #[serde(default)]
    pub limit: Option<f64>,
    #[serde(default)]
    pub exceeds_essential_min: Option<bool>,
}

/// Limit of `h_{ρ_r}` along algebraic integers equidistributing to the area
/// measure on `|z| ≤ r`: `−1/8 + ½ log r`, compared with `AZ(ρ_r, λ)`.
pub fn limiting_height_for_uniform(r: f64) -> Result<UniformLimit> {
    let check = arithmetic_measure_check(r)?;
    if !check.arithmetic {
        return Ok(UniformLimit {
            arithmetic: false,
            limit: None,
            exceeds_essential_min: None,
        });
    }
    let limit = -0.125 + 0.5 * r.ln();
    let az = az_closed_form(&RadiusProfile::archimedean(r)?, &RadiusProfile::archimedean(1.0)?)?.value;
    Ok(UniformLimit {
        arithmetic: true,
        limit: Some(limit),
        exceeds_essential_min: Some(limit > az),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn half() -> (BigInt, BigInt) {
        (BigInt::from(1), BigInt::from(2))
    }

    #[test]
    fn lehmer_gap_closed_form() {
        let (a, b) = half();
        let recs = lehmer_failure_sequence(&a, &b, &[3, 101], &"inf:1".parse().unwrap()).unwrap();
        let expect3 = LN_2 / 3.0 + (2f64.powf(-2.0 / 3.0) - 1.0) / 2.0;
        assert!((recs[0].gap - expect3).abs() < 1e-15);
        assert!((recs[0].gap - 0.0460294).abs() < 1e-7);
        assert!((recs[1].scaled_gap - 0.004735).abs() < 1e-6);
        let p2 = 101.0 * recs[1].scaled_gap;
        assert!((p2 - 0.47826).abs() < 1e-5);
    }

    #[test]
    fn lehmer_preconditions() {
        let r = "inf:1".parse().unwrap();
        let two = BigInt::from(2);
        let one = BigInt::from(1);
        assert!(matches!(lehmer_failure_sequence(&two, &one, &[3], &r), Err(Error::Domain(_))));
        let (a, b) = half();
        assert!(lehmer_failure_sequence(&a, &b, &[4], &r).is_err());
        // 1/2 is not small at 2
        let r2 = "inf:1,2:1".parse().unwrap();
        assert!(lehmer_failure_sequence(&a, &b, &[3], &r2).is_err());
    }

    #[test]
    fn discrepancy_examples() {
        let circle = MeasureSpec::Circle(1.0);
        for n in [3u64, 16, 17, 50] {
            let pts: Vec<_> = roots_of_unity(n, false).into_iter().map(|z| (z, 1.0 / n as f64)).collect();
            let d = empirical_discrepancy(&pts, &circle).unwrap();
            assert!(d <= 16.0 / n as f64, "n = {n}: {d}");
            assert!(radial_levy(&pts, &circle) < 1e-12);
        }
        let origin = [(Complex64::new(0.0, 0.0), 1.0)];
        let disk = MeasureSpec::ArealDisk(1.0);
        assert_eq!(radial_ks(&origin, &disk), 1.0);
        assert_eq!(empirical_discrepancy(&origin, &disk).unwrap(), 1.0);
        let d = radial_levy(&origin, &disk);
        assert!((d - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        // conjugates of 2x^p − 1 approach the unit circle from inside
        let lehmer = |p: u64| -> Vec<(Complex64, f64)> {
            roots_of_unity(p, false)
                .into_iter()
                .map(|z| (z * 2f64.powf(-1.0 / p as f64), 1.0 / p as f64))
                .collect()
        };
        let (d7, d61) = (radial_levy(&lehmer(7), &circle), radial_levy(&lehmer(61), &circle));
        assert!(d61 < d7 && d61 <= 1.0 - 2f64.powf(-1.0 / 61.0) + 1e-12);
        assert!(empirical_discrepancy(&origin, &MeasureSpec::ChebyshevEquilibrium).is_err());
    }

    #[test]
    fn arithmetic_threshold() {
        let c = arithmetic_measure_check(1.0).unwrap();
        assert_eq!((c.arithmetic, c.certificate), (false, -0.5));
        let e = 0.5f64.exp();
        let c = arithmetic_measure_check(e).unwrap();
        assert!(c.arithmetic && c.certificate.abs() < 1e-15);
        let c = arithmetic_measure_check(2.0).unwrap();
        assert!(c.arithmetic && (c.certificate - 0.193147).abs() < 1e-6);
        assert!(!arithmetic_measure_check(e - 1e-9).unwrap().arithmetic);
    }

    #[test]
    fn uniform_limits() {
        let u = limiting_height_for_uniform(0.5f64.exp()).unwrap();
        assert!((u.limit.unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(u.exceeds_essential_min, Some(true));
        let u = limiting_height_for_uniform(2.0).unwrap();
        assert!((u.limit.unwrap() - 0.221574).abs() < 1e-6);
        assert!(!limiting_height_for_uniform(1.0).unwrap().arithmetic);
    }
}
