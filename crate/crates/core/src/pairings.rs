//! Mutual energies, Arakelov–Zhang pairings and radius optimization.
//!
//! For adelic measures μ, ν the pairing is `Σ_v ½(μ_v − ν_v, μ_v − ν_v)_v`,
//! and each local term expands as `½E(μ_v) − M(μ_v, ν_v) + ½E(ν_v)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{areal_h_infinity, PlaceContribution, GAMMA_TOL};
use crate::measures::{f_r, f_r_radius_derivative, MeasureSpec, RadiusProfile};
use crate::places::Place;
use crate::quadrature::{midpoint_with_estimate, neumaier_sum};

pub const DEFAULT_NODES: usize = 1 << 16;
pub const MIN_NODES: usize = 16;
pub const DEFAULT_SERIES_TERMS: usize = 1_000_000;
/// Successive Chebyshev quadratures must agree this closely.
const CHEBYSHEV_CONVERGENCE: f64 = 1e-9;
const MAX_NODES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairingMethod {
    ClosedForm,
    Quadrature { nodes: usize },
    Hybrid { nodes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: f64,
    pub method: PairingMethod,
    pub error_estimate: f64,
    pub breakdown: Vec<PlaceContribution>,
    /// Independent closed-form value when one is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < MIN_NODES {
        return Err(Error::invalid(format!("need at least {MIN_NODES} quadrature nodes, got {nodes}")));
    }
    Ok(())
}

fn priority(m: &MeasureSpec) -> u8 {
    match m {
        MeasureSpec::PointMassSet(_) => 0,
        MeasureSpec::ChebyshevEquilibrium => 1,
        MeasureSpec::Circle(_) => 2,
        MeasureSpec::ArealDisk(_) => 3,
    }
}

fn radius_of(m: &MeasureSpec) -> Option<f64> {
    match m {
        MeasureSpec::ArealDisk(r) | MeasureSpec::Circle(r) => Some(*r),
        _ => None,
    }
}

/// `(a, b) = −∫ p_a db`, by one-dimensional quadrature over whichever side
/// has the simpler parametrization. The pairing is symmetric, so the sides
/// may be swapped.
pub fn mutual_energy_quadrature(a: &MeasureSpec, b: &MeasureSpec, nodes: usize) -> Result<PairingResult> {
    check_nodes(nodes)?;
    let (pot, int) = if priority(a) <= priority(b) { (b, a) } else { (a, b) };
    let closed_form = mutual_energy_closed(a, b);
    let quad = |value: f64, error_estimate: f64, method| PairingResult {
        value,
        method,
        error_estimate,
        breakdown: vec![PlaceContribution {
            place: Place::Infinity,
            contribution: value,
        }],
        closed_form,
    };
    match int {
        MeasureSpec::PointMassSet(atoms) => {
            let mut terms = Vec::with_capacity(atoms.len());
            for &(z, w) in atoms {
                let p = pot.potential(z);
                if !p.is_finite() {
                    return Err(Error::DiagonalDivergence(format!("atom {z} is shared by both measures")));
                }
                terms.push(-w * p);
            }
            Ok(quad(neumaier_sum(terms), 0.0, PairingMethod::ClosedForm))
        }
        MeasureSpec::ChebyshevEquilibrium => {
            // x = 2cos θ; symmetric about θ = π/2
            let breaks: Vec<f64> = radius_of(pot)
                .filter(|&r| r < 2.0)
                .map(|r| (r / 2.0).acos())
                .into_iter()
                .collect();
            let g = |th: f64| pot.potential(Complex64::new(2.0 * th.cos(), 0.0));
            let (v, e) = midpoint_with_estimate(g, 0.0, FRAC_PI_2, &breaks, nodes);
            let scale = -2.0 / PI;
            Ok(quad(scale * v, 2.0 / PI * e, PairingMethod::Quadrature { nodes }))
        }
        MeasureSpec::Circle(t) => {
            let g = |th: f64| pot.potential(Complex64::from_polar(*t, th));
            let (v, e) = midpoint_with_estimate(g, 0.0, 2.0 * PI, &[], nodes);
            Ok(quad(-v / (2.0 * PI), e / (2.0 * PI), PairingMethod::Quadrature { nodes }))
        }
        MeasureSpec::ArealDisk(r) => {
            // only reached when both sides are disks
            let breaks: Vec<f64> = radius_of(pot).into_iter().collect();
            let g = |s: f64| pot.potential(Complex64::new(s, 0.0)) * 2.0 * s / (r * r);
            let (v, e) = midpoint_with_estimate(g, 0.0, *r, &breaks, nodes);
            Ok(quad(-v, e, PairingMethod::Quadrature { nodes }))
        }
    }
}

/// Closed-form mutual energy where one is known.
pub fn mutual_energy_closed(a: &MeasureSpec, b: &MeasureSpec) -> Option<f64> {
    use MeasureSpec::*;
    match (a, b) {
        (Circle(t), Circle(s)) => Some(-t.max(*s).ln()),
        (ArealDisk(r), Circle(t)) | (Circle(t), ArealDisk(r)) => Some(-f_r(*r, *t)),
        (ArealDisk(r), ArealDisk(s)) => {
            let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
            Some(-(hi.ln() - 0.5 + lo * lo / (4.0 * hi * hi)))
        }
        (ChebyshevEquilibrium, ChebyshevEquilibrium) => Some(0.0),
        (ChebyshevEquilibrium, Circle(t)) | (Circle(t), ChebyshevEquilibrium) if *t >= 2.0 => {
            Some(-t.ln())
        }
        (ChebyshevEquilibrium, ArealDisk(r)) | (ArealDisk(r), ChebyshevEquilibrium) => {
            chebyshev_closed(*r).map(|az| 0.5 * (0.25 - r.ln()) - az)
        }
        _ => None,
    }
}

/// `½(μ − ν, μ − ν)` at one place, given the local energies and mutual energy.
fn local_az(e_mu: f64, m: f64, e_nu: f64) -> f64 {
    0.5 * e_mu - m + 0.5 * e_nu
}

fn check_gamma_one(t: &RadiusProfile) -> Result<()> {
    let lg = t.log_gamma();
    if lg.abs() > GAMMA_TOL {
        return Err(Error::Precondition(format!("gamma(t) = {} is not 1", t.gamma())));
    }
    Ok(())
}

fn union_places(r: &RadiusProfile, t: &RadiusProfile) -> Vec<Place> {
    let mut places: Vec<Place> = r.places().chain(t.places()).copied().collect();
    places.sort_unstable();
    places.dedup();
    places
}

/// `AZ(ρ_r, λ_t)` for `γ(t) = 1`:
/// `h_{ρ_r}(∞) + Σ_S f_{r_v}(t_v) + Σ_{S′∖S} log⁺ t_v`.
///
/// Places of `r` missing from `t` carry `t_v = 1`. The breakdown lists the
/// local terms `½(ρ_v − λ_v, ρ_v − λ_v)`, each nonnegative.
pub fn az_closed_form(r: &RadiusProfile, t: &RadiusProfile) -> Result<PairingResult> {
    check_gamma_one(t)?;
    let t_at = |p: &Place| t.get(p).unwrap_or(1.0);
    let s_sum: f64 = r.iter().map(|(p, &rv)| f_r(rv, t_at(p))).sum();
    let extra: f64 = t
        .iter()
        .filter(|(p, _)| !r.contains(p))
        .map(|(_, &tv)| tv.ln().max(0.0))
        .sum();
    let value = areal_h_infinity(r) + s_sum + extra;
    let breakdown = union_places(r, t)
        .into_iter()
        .map(|p| {
            let tv = t_at(&p);
            let contribution = match r.get(&p) {
                Some(rv) => local_az(0.25 - rv.ln(), -f_r(rv, tv), -tv.ln()),
                None => local_az(0.0, -tv.ln().max(0.0), -tv.ln()),
            };
            PlaceContribution { place: p, contribution }
        })
        .collect();
    Ok(PairingResult {
        value,
        method: PairingMethod::ClosedForm,
        error_estimate: 0.0,
        breakdown,
        closed_form: Some(value),
    })
}

/// `AZ(ρ_r, λ_t)` summed place by place, with every archimedean energy
/// computed by quadrature and finite places in closed form.
pub fn az_assembled(r: &RadiusProfile, t: &RadiusProfile, nodes: usize) -> Result<PairingResult> {
    check_gamma_one(t)?;
    check_nodes(nodes)?;
    let mut breakdown = Vec::new();
    let mut error_estimate = 0.0;
    for p in union_places(r, t) {
        let tv = t.get(&p).unwrap_or(1.0);
        let contribution = match p {
            Place::Infinity => {
                let rho = match r.get(&p) {
                    Some(rv) => MeasureSpec::ArealDisk(rv),
                    None => MeasureSpec::Circle(1.0),
                };
                let lam = MeasureSpec::Circle(tv);
                let e_rho = mutual_energy_quadrature(&rho, &rho, nodes)?;
                let m = mutual_energy_quadrature(&rho, &lam, nodes)?;
                let e_lam = mutual_energy_quadrature(&lam, &lam, nodes)?;
                error_estimate += 0.5 * e_rho.error_estimate + m.error_estimate + 0.5 * e_lam.error_estimate;
                local_az(e_rho.value, m.value, e_lam.value)
            }
            Place::Finite(_) => match r.get(&p) {
                Some(rv) => local_az(0.25 - rv.ln(), -f_r(rv, tv), -tv.ln()),
                None => local_az(0.0, -tv.ln().max(0.0), -tv.ln()),
            },
        };
        breakdown.push(PlaceContribution { place: p, contribution });
    }
    let value = neumaier_sum(breakdown.iter().map(|c| c.contribution));
    Ok(PairingResult {
        value,
        method: PairingMethod::Hybrid { nodes },
        error_estimate,
        breakdown,
        closed_form: az_closed_form(r, t).ok().map(|c| c.value),
    })
}

/// `AZ` between two measures that are standard at every finite place and
/// given by `left`, `right` at infinity.
pub fn az_pairing(left: &MeasureSpec, right: &MeasureSpec, nodes: usize) -> Result<PairingResult> {
    use MeasureSpec::*;
    match (left, right) {
        (ArealDisk(r), ChebyshevEquilibrium) | (ChebyshevEquilibrium, ArealDisk(r)) => {
            return az_chebyshev(*r, nodes)
        }
        _ => {}
    }
    let e_l = left.energy()?;
    let e_r = right.energy()?;
    if left == right {
        return Ok(PairingResult {
            value: 0.0,
            method: PairingMethod::ClosedForm,
            error_estimate: 0.0,
            breakdown: vec![PlaceContribution {
                place: Place::Infinity,
                contribution: 0.0,
            }],
            closed_form: Some(0.0),
        });
    }
    let m = mutual_energy_quadrature(left, right, nodes)?;
    let value = local_az(e_l, m.value, e_r);
    Ok(PairingResult {
        value,
        method: m.method,
        error_estimate: m.error_estimate,
        breakdown: vec![PlaceContribution {
            place: Place::Infinity,
            contribution: value,
        }],
        closed_form: m.closed_form.map(|mc| local_az(e_l, mc, e_r)),
    })
}

/// `L(2, χ)` for the nontrivial character mod 3 with about `terms` terms.
///
/// Consecutive terms are paired as `g(k) = (3k+1)^{−2} − (3k+2)^{−2}` and
/// the tail is closed with Euler–Maclaurin, `∫_K^∞ g + g(K)/2 − g′(K)/12`.
pub fn dirichlet_l2_chi3_terms(terms: usize) -> f64 {
    let k_max = (terms / 3).max(16);
    let g = |k: f64| (3.0 * k + 1.0).powi(-2) - (3.0 * k + 2.0).powi(-2);
    let dg = |k: f64| -6.0 * (3.0 * k + 1.0).powi(-3) + 6.0 * (3.0 * k + 2.0).powi(-3);
    let kk = k_max as f64;
    let integral = 1.0 / (3.0 * (3.0 * kk + 1.0)) - 1.0 / (3.0 * (3.0 * kk + 2.0));
    let tail = integral + g(kk) / 2.0 - dg(kk) / 12.0;
    // smallest terms first
    let head = neumaier_sum((0..k_max).rev().map(|k| g(k as f64)));
    head + tail
}

pub fn dirichlet_l2_chi3() -> f64 {
    dirichlet_l2_chi3_terms(DEFAULT_SERIES_TERMS)
}

/// `7/24 − √3/(2π) + (3√3/(4π)) L(2, χ)`.
pub fn chebyshev_closed_at_one() -> f64 {
    let s3 = 3f64.sqrt();
    7.0 / 24.0 - s3 / (2.0 * PI) + 3.0 * s3 / (4.0 * PI) * dirichlet_l2_chi3()
}

fn chebyshev_closed(r: f64) -> Option<f64> {
    if r >= 2.0 {
        Some(0.5 * r.ln() - 0.375 + 1.0 / (r * r))
    } else if r == 1.0 {
        Some(chebyshev_closed_at_one())
    } else {
        None
    }
}

/// `AZ(ρ_r, μ_Cheb) = (1/8 − ½ log r) + (1/π)∫_0^π f_r(|2cos θ|) dθ`.
///
/// Midpoint quadrature in θ split at the kink `2cos θ = r`, doubling the
/// node count until two successive values agree to `1e-9`.
pub fn az_chebyshev(r: f64, nodes: usize) -> Result<PairingResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    check_nodes(nodes)?;
    let breaks: Vec<f64> = if r < 2.0 { vec![(r / 2.0).acos()] } else { Vec::new() };
    let g = |th: f64| f_r(r, 2.0 * th.cos());
    let mut n = nodes;
    let (mut integral, mut est) = midpoint_with_estimate(g, 0.0, FRAC_PI_2, &breaks, n);
    while 3.0 * est >= CHEBYSHEV_CONVERGENCE * PI / 2.0 && n < MAX_NODES {
        n *= 2;
        (integral, est) = midpoint_with_estimate(g, 0.0, FRAC_PI_2, &breaks, n);
    }
    let value = 0.125 - 0.5 * r.ln() + 2.0 / PI * integral;
    let error_estimate = 2.0 / PI * est;
    let closed_form = chebyshev_closed(r);
    if let Some(c) = closed_form {
        if (c - value).abs() > 1e-7 {
            return Err(Error::Numeric {
                message: format!("quadrature {value} disagrees with closed form {c}"),
                residual: (c - value).abs(),
            });
        }
    }
    Ok(PairingResult {
        value,
        method: PairingMethod::Quadrature { nodes: n },
        error_estimate,
        breakdown: vec![PlaceContribution {
            place: Place::Infinity,
            contribution: value,
        }],
        closed_form,
    })
}

fn chebyshev_derivative(r: f64) -> f64 {
    if r > 2.0 {
        (r * r - 4.0) / (2.0 * r.powi(3))
    } else {
        let a = (r / 2.0).asin();
        -1.0 / (2.0 * r) + 2.0 * a / (PI * r) + (4.0 - r * r).sqrt() / (PI * r * r)
            - 4.0 * a / (PI * r.powi(3))
    }
}

/// `d/dr AZ(ρ_r, μ_Cheb)`.
pub fn az_chebyshev_derivative(r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(chebyshev_derivative(r))
}

/// `AZ(ρ_r, λ)` with `S = {∞}`: `1/8 − ½ log r + f_r(1)`.
fn lambda_objective(r: f64) -> f64 {
    0.125 - 0.5 * r.ln() + f_r(r, 1.0)
}

fn lambda_derivative(r: f64) -> f64 {
    -0.5 / r + f_r_radius_derivative(r, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusOptimum {
    pub r_star: f64,
    pub value: f64,
    /// True when the minimum over the interval sits at an endpoint.
    pub boundary: bool,
}

type Objective = Box<dyn Fn(f64) -> f64>;

/// Minimizes `r ↦ AZ(ρ_r, target)` over `[lo, hi]`.
///
/// Golden-section search narrows the bracket, then bisection on the
/// analytic derivative pins the minimizer to `tol`. A minimum at an endpoint
/// is returned with `boundary` set.
pub fn optimize_radius(target: &MeasureSpec, lo: f64, hi: f64, tol: f64) -> Result<RadiusOptimum> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::NoMinimum(format!("[{lo}, {hi}] is not a valid radius interval")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (objective, derivative): (Objective, fn(f64) -> f64) = match target {
        MeasureSpec::Circle(t) if *t == 1.0 => (Box::new(lambda_objective), lambda_derivative),
        MeasureSpec::ChebyshevEquilibrium => (
            Box::new(|r| az_chebyshev(r, DEFAULT_NODES).map(|p| p.value).unwrap_or(f64::NAN)),
            chebyshev_derivative,
        ),
        other => {
            return Err(Error::UnsupportedMeasure(format!(
                "radius optimization supports circle:1 and chebyshev, not {other}"
            )))
        }
    };

    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let coarse = 1e-3 * (hi - lo);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while b - a > coarse {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    let a = (a - coarse).max(lo);
    let b = (b + coarse).min(hi);
    let (da, db) = (derivative(a), derivative(b));

    let (r_star, boundary) = if da < 0.0 && db > 0.0 {
        let (mut x0, mut x1) = (a, b);
        while x1 - x0 > tol {
            let mid = 0.5 * (x0 + x1);
            if derivative(mid) < 0.0 {
                x0 = mid;
            } else {
                x1 = mid;
            }
        }
        (0.5 * (x0 + x1), false)
    } else if da >= 0.0 && a == lo {
        (lo, true)
    } else if db <= 0.0 && b == hi {
        (hi, true)
    } else {
        return Err(Error::NoMinimum(format!(
            "derivative does not change sign on [{a}, {b}]"
        )));
    };
    let value = objective(r_star);
    if !value.is_finite() {
        return Err(Error::Numeric {
            message: format!("objective is not finite at r = {r_star}"),
            residual: f64::INFINITY,
        });
    }
    Ok(RadiusOptimum {
        r_star,
        value,
        boundary,
    })
}
