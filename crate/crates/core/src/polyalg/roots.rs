//! Aberth–Ehrlich simultaneous iteration for all complex roots.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::IntPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-13;
pub const MAX_ROOT_ITERATIONS: usize = 500;

/// Real/imaginary parts below this (relative to `max(1, |z|)`) are snapped to zero.
const SNAP: f64 = 1e-12;

/// Newton correction `p(z)/p'(z)` and the backward error
/// `|p(z)| / sum |a_i| |z|^i`, evaluated on the reversed polynomial when
/// `|z| > 1` so that high powers never overflow.
fn newton_step(coeffs: &[f64], z: Complex64) -> (Complex64, f64) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        let az = z.norm();
        for &a in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
            scale = scale * az + a.abs();
        }
        (p / dp, p.norm() / scale)
    } else {
        let w = z.inv();
        let aw = w.norm();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for &a in coeffs {
            dq = dq * w + q;
            q = q * w + a;
            scale = scale * aw + a.abs();
        }
        // p(z) = z^n q(1/z)  =>  p/p' = z q / (n q - w q')
        let denom = q * n as f64 - w * dq;
        (z * q / denom, q.norm() / scale)
    }
}

/// Backward error of `z` as a root of the polynomial with these coefficients.
pub fn backward_error(coeffs: &[f64], z: Complex64) -> f64 {
    newton_step(coeffs, z).1
}

/// Fujiwara's bound `2 max |a_{n-k}/a_n|^{1/k}` (last term halved).
fn fujiwara_radius(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let mut log_r = f64::NEG_INFINITY;
    for k in 1..=n {
        let mut a = coeffs[n - k].abs();
        if k == n {
            a /= 2.0;
        }
        if a > 0.0 {
            log_r = log_r.max((a.ln() - lead.ln()) / k as f64);
        }
    }
    2.0 * log_r.exp()
}

fn aberth(coeffs: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let radius = fujiwara_radius(coeffs);
    // Offset keeps the start set off the real axis and asymmetric.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let floor = 2.0 * n as f64 * f64::EPSILON;
    let mut done = vec![false; n];

    for _ in 0..MAX_ROOT_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (ratio, berr) = newton_step(coeffs, z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let delta = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !delta.is_finite() {
                if berr <= floor {
                    done[k] = true;
                    continue;
                }
                return Err(Error::Numeric {
                    message: "root iteration produced a non-finite step".into(),
                    residual: berr,
                });
            }
            z[k] -= delta;
            if delta.norm() <= tol * z[k].norm() || berr <= floor {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }

    let worst = z
        .iter()
        .map(|&r| backward_error(coeffs, r))
        .fold(0.0, f64::max);
    if done.iter().any(|&d| !d) && worst > tol.max(floor) {
        return Err(Error::Numeric {
            message: format!("root solver did not converge in {MAX_ROOT_ITERATIONS} iterations"),
            residual: worst,
        });
    }
    Ok(z)
}

fn snap(z: Complex64) -> Complex64 {
    let scale = z.norm() * SNAP;
    let re = if z.re.abs() <= scale { 0.0 } else { z.re };
    let im = if z.im.abs() <= scale { 0.0 } else { z.im };
    Complex64::new(re, im)
}

/// Pairs each upper-half-plane root with its nearest lower-half-plane partner
/// and replaces both by an exactly conjugate pair.
fn symmetrize(roots: &mut [Complex64]) {
    let upper: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im > 0.0).collect();
    let lower: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].im < 0.0).collect();
    if upper.len() != lower.len() {
        return;
    }
    let mut used = vec![false; lower.len()];
    for &u in &upper {
        let best = lower
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|a, b| {
                let da = (roots[u] - roots[*a.1].conj()).norm();
                let db = (roots[u] - roots[*b.1].conj()).norm();
                da.total_cmp(&db)
            })
            .map(|(j, &l)| (j, l));
        if let Some((j, l)) = best {
            used[j] = true;
            let mid = (roots[u] + roots[l].conj()) * 0.5;
            roots[u] = mid;
            roots[l] = mid.conj();
        }
    }
}

fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// All complex roots of a squarefree polynomial.
///
/// Roots at zero are split off exactly. The rest are found by Aberth
/// iteration from a circle of Fujiwara radius, then snapped, made
/// conjugate-symmetric and sorted by `(re, im)`.
pub fn complex_roots(poly: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let n = match poly.degree() {
        None | Some(0) => {
            return Err(Error::invalid("complex roots require degree >= 1"));
        }
        Some(n) => n,
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("root tolerance must be positive"));
    }
    let zeros = poly.zero_root_multiplicity();
    let reduced = poly.strip_zero_roots();
    let coeffs = reduced.to_f64_coeffs()?;

    let mut roots = match coeffs.len() - 1 {
        0 => Vec::new(),
        1 => vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)],
        _ => aberth(&coeffs, tol)?,
    };
    for r in roots.iter_mut() {
        *r = snap(*r);
    }
    symmetrize(&mut roots);
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    roots.sort_by(lexicographic);
    debug_assert_eq!(roots.len(), n);
    Ok(roots)
}
