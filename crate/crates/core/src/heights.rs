//! Weil, Mahler, areal and circle-family heights, essential minima and
//! Kronecker certificates.
//!
//! Every height here has the shape `h(∞) + Σ_v Σ_k (1/n) φ_v(|α_k|_v)`
//! for a per-place kernel `φ_v`: `log⁺` off `S`, and `f_{r_v}` or
//! `log max{t_v, ·}` on `S`.

use std::f64::consts::LN_2;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{f_r, RadiusProfile};
use crate::pairings::az_closed_form;
use crate::places::{local_profiles, ratio_to_f64, AlgebraicNumber, Place, ProfileEntry};
use crate::polyalg::{complex_roots, squarefree_decomposition, IntPolynomial};

/// Tolerance on `log γ` for deciding `γ(r) = 1`.
pub const GAMMA_TOL: f64 = 1e-12;
/// Absolute tolerance for archimedean Kronecker comparisons.
pub const ARCH_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceContribution {
    pub place: Place,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    pub total: f64,
    pub h_infinity: f64,
    pub per_place: Vec<PlaceContribution>,
    pub method: String,
}

impl HeightReport {
    pub fn contribution(&self, place: Place) -> Option<f64> {
        self.per_place
            .iter()
            .find(|c| c.place == place)
            .map(|c| c.contribution)
    }
}

#[derive(Clone, Copy, Debug)]
enum Kernel {
    LogPlus,
    Areal(f64),
    Circle(f64),
}

impl Kernel {
    fn eval(self, place: Place, e: &ProfileEntry) -> f64 {
        match (self, place, e.exponent) {
            // exact at finite places: log⁺ p^q = max(q, 0) log p
            (Kernel::LogPlus, Place::Finite(p), Some(q)) => {
                ratio_to_f64(q.max(Ratio::zero())) * (p as f64).ln()
            }
            (Kernel::LogPlus, _, _) => e.log_value.max(0.0),
            (Kernel::Areal(r), _, _) => f_r(r, e.value),
            (Kernel::Circle(t), _, _) => t.max(e.value).ln(),
        }
    }

    fn at_zero(self) -> f64 {
        match self {
            Kernel::LogPlus => 0.0,
            Kernel::Areal(r) => f_r(r, 0.0),
            Kernel::Circle(t) => t.ln(),
        }
    }

    fn at_one(self) -> f64 {
        match self {
            Kernel::LogPlus => 0.0,
            Kernel::Areal(r) => f_r(r, 1.0),
            Kernel::Circle(t) => t.max(1.0).ln(),
        }
    }
}

/// The profile on `S` and the kernel built from each radius.
type SKernel<'a> = (&'a RadiusProfile, fn(f64) -> Kernel);

struct HeightRule<'a> {
    h_infinity: f64,
    s: Option<SKernel<'a>>,
    method: &'static str,
}

impl HeightRule<'_> {
    fn kernel(&self, place: &Place) -> Kernel {
        match self.s {
            Some((r, make)) => r.get(place).map(make).unwrap_or(Kernel::LogPlus),
            None => Kernel::LogPlus,
        }
    }

    fn s_places(&self) -> Vec<Place> {
        self.s
            .map(|(r, _)| r.places().copied().collect())
            .unwrap_or_default()
    }

    fn report(&self, contributions: Vec<(Place, f64)>) -> HeightReport {
        let per_place: Vec<PlaceContribution> = contributions
            .into_iter()
            .map(|(place, contribution)| PlaceContribution { place, contribution })
            .collect();
        let total = self.h_infinity + per_place.iter().map(|c| c.contribution).sum::<f64>();
        HeightReport {
            total,
            h_infinity: self.h_infinity,
            per_place,
            method: self.method.to_string(),
        }
    }

    fn zero_contributions(&self) -> Vec<(Place, f64)> {
        self.s_places()
            .into_iter()
            .map(|p| (p, self.kernel(&p).at_zero()))
            .collect()
    }

    fn evaluate(&self, alpha: &AlgebraicNumber, tol: f64) -> Result<HeightReport> {
        let poly = match alpha {
            AlgebraicNumber::Infinity => return Ok(self.report(Vec::new())),
            AlgebraicNumber::Zero => return Ok(self.report(self.zero_contributions())),
            AlgebraicNumber::Roots(p) => p,
        };
        let n = poly.degree().unwrap_or(0);
        let k = poly.zero_root_multiplicity();
        if k == n {
            return Ok(self.report(self.zero_contributions()));
        }
        let rest = AlgebraicNumber::Roots(poly.strip_zero_roots());
        let profiles = local_profiles(&rest, tol)?;

        let mut places: Vec<Place> = profiles.keys().copied().collect();
        places.extend(self.s_places());
        places.sort_unstable();
        places.dedup();

        // A root at 0 (forced input only) is weighted k/n, the rest (n-k)/n.
        let w_zero = k as f64 / n as f64;
        let w_rest = 1.0 - w_zero;
        let contributions = places
            .into_iter()
            .map(|place| {
                let kernel = self.kernel(&place);
                let rest_part = match profiles.get(&place) {
                    Some(prof) => prof.integrate(|e| kernel.eval(place, e)),
                    None => kernel.at_one(),
                };
                let c = if k == 0 {
                    rest_part
                } else {
                    w_zero * kernel.at_zero() + w_rest * rest_part
                };
                (place, c)
            })
            .filter(|(place, c)| *c != 0.0 || place.is_archimedean())
            .collect();
        Ok(self.report(contributions))
    }
}

/// `h(∞) = Σ_S (1/8 − ½ log r_v)` for the areal measure `ρ_r`.
pub fn areal_h_infinity(r: &RadiusProfile) -> f64 {
    r.iter().map(|(_, &rv)| 0.125 - 0.5 * rv.ln()).sum()
}

/// `h(∞) = −½ Σ_S log t_v` for the circle measure `λ_t`.
pub fn lambda_h_infinity(t: &RadiusProfile) -> f64 {
    -0.5 * t.log_gamma()
}

/// Absolute logarithmic Weil height, with `h(0) = h(∞) = 0`.
pub fn weil_height(alpha: &AlgebraicNumber, tol: f64) -> Result<HeightReport> {
    HeightRule {
        h_infinity: 0.0,
        s: None,
        method: "weil",
    }
    .evaluate(alpha, tol)
}

/// Areal Weil height `h_{ρ_r}`.
pub fn areal_height(alpha: &AlgebraicNumber, r: &RadiusProfile, tol: f64) -> Result<HeightReport> {
    HeightRule {
        h_infinity: areal_h_infinity(r),
        s: Some((r, Kernel::Areal)),
        method: "areal",
    }
    .evaluate(alpha, tol)
}

/// Circle-family height `h_{λ_t}`: `log max{t_v, |α|}` on `S`, `log⁺` elsewhere.
pub fn lambda_height(alpha: &AlgebraicNumber, t: &RadiusProfile, tol: f64) -> Result<HeightReport> {
    HeightRule {
        h_infinity: lambda_h_infinity(t),
        s: Some((t, Kernel::Circle)),
        method: "lambda",
    }
    .evaluate(alpha, tol)
}

/// Sum over the roots of each squarefree factor, counted with multiplicity,
/// of `φ(|root|)`, plus `log|a_n|`.
fn root_sum(p: &IntPolynomial, tol: f64, phi: impl Fn(f64) -> f64) -> Result<f64> {
    let n = p
        .degree()
        .ok_or_else(|| Error::invalid("Mahler measure of the zero polynomial"))?;
    let mut total = big_log_abs(p.leading().unwrap());
    if n == 0 {
        return Ok(total);
    }
    for (factor, mult) in squarefree_decomposition(p)? {
        let roots = complex_roots(&factor, tol)?;
        let s: f64 = roots.iter().map(|z| phi(z.norm())).sum();
        total += mult as f64 * s;
    }
    Ok(total)
}

fn big_log_abs(x: &num_bigint::BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * LN_2
}

/// `m(P) = log|a_n| + Σ log⁺|α_k|`.
pub fn mahler_measure(p: &IntPolynomial, tol: f64) -> Result<f64> {
    root_sum(p, tol, |x| x.ln().max(0.0))
}

/// `m_𝔻(P) = m(P) + Σ_{|α_k|<1} (|α_k|² − 1)/2`.
pub fn areal_mahler_measure(p: &IntPolynomial, tol: f64) -> Result<f64> {
    root_sum(p, tol, |x| {
        if x < 1.0 {
            (x * x - 1.0) / 2.0
        } else {
            x.ln()
        }
    })
}

pub fn gamma(r: &RadiusProfile) -> f64 {
    r.gamma()
}

/// Where `γ(r)` sits relative to 1, with a `1e-12` band around equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRegime {
    Below,
    Equal,
    Above,
}

pub fn gamma_regime(r: &RadiusProfile) -> GammaRegime {
    let lg = r.log_gamma();
    if lg.abs() <= GAMMA_TOL {
        GammaRegime::Equal
    } else if lg < 0.0 {
        GammaRegime::Below
    } else {
        GammaRegime::Above
    }
}

/// The uniform scale `c = γ(r)^{−1/|S|}` with `γ(c·r) = 1`.
pub fn normalizing_scale(r: &RadiusProfile) -> f64 {
    (-r.log_gamma() / r.len() as f64).exp()
}

/// Essential minimum of `h_{ρ_r}`.
pub fn essential_minimum(r: &RadiusProfile) -> Result<f64> {
    match gamma_regime(r) {
        GammaRegime::Below | GammaRegime::Equal => Ok(areal_h_infinity(r)),
        GammaRegime::Above => {
            let t = r.scaled(normalizing_scale(r))?;
            Ok(az_closed_form(r, &t)?.value)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "=")]
    Equal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub place: Place,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KroneckerVerdict {
    pub attains_minimum: bool,
    pub certificate: Vec<CertificateRow>,
    pub essential_minimum: f64,
}

/// Best rational `a/b` with `b ≤ 10⁴` matching `x` to `1e-12`, if any.
pub(crate) fn snap_rational(x: f64) -> Option<Ratio<i64>> {
    if !x.is_finite() || x.abs() > 1e6 {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > 10_000 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some(Ratio::new(h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac == 0.0 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

fn compare_entry(place: Place, e: &ProfileEntry, relation: Relation, bound: f64) -> CertificateRow {
    let satisfied = match (place, e.exponent) {
        (Place::Finite(p), Some(q)) => {
            let target = (bound.ln() / (p as f64).ln()).max(-1e6);
            match snap_rational(target) {
                Some(b) => match relation {
                    Relation::AtLeast => q >= b,
                    Relation::Equal => q == b,
                },
                None => {
                    relation == Relation::AtLeast && ratio_to_f64(q) > target
                }
            }
        }
        _ => match relation {
            Relation::AtLeast => e.value >= bound - ARCH_TOL,
            Relation::Equal => (e.value - bound).abs() <= ARCH_TOL,
        },
    };
    CertificateRow {
        place,
        value: e.value,
        relation,
        bound,
        satisfied,
    }
}

/// Decides whether `h_{ρ_r}(α)` attains the essential minimum.
///
/// For `γ(r) < 1` this needs `|α|_w ≥ r_w` on `S`; for `γ(r) = 1`,
/// equality on `S`; for `γ(r) > 1` equality against `t = c·r`. Off `S`
/// every absolute value must be at least 1.
pub fn kronecker_classify(alpha: &AlgebraicNumber, r: &RadiusProfile, tol: f64) -> Result<KroneckerVerdict> {
    match alpha {
        AlgebraicNumber::Zero => return Err(Error::Domain("Kronecker classification of 0".into())),
        AlgebraicNumber::Infinity => {
            return Err(Error::Domain("Kronecker classification of infinity".into()))
        }
        AlgebraicNumber::Roots(p) if p.coeff(0).is_zero() => {
            return Err(Error::Domain("conjugate set contains 0".into()))
        }
        _ => {}
    }
    let (targets, relation) = match gamma_regime(r) {
        GammaRegime::Below => (r.clone(), Relation::AtLeast),
        GammaRegime::Equal => (r.clone(), Relation::Equal),
        GammaRegime::Above => (r.scaled(normalizing_scale(r))?, Relation::Equal),
    };
    let profiles = local_profiles(alpha, tol)?;
    let unit = ProfileEntry::archimedean(1.0, Ratio::from_integer(1));

    let mut places: Vec<Place> = profiles.keys().copied().collect();
    places.extend(targets.places().copied());
    places.sort_unstable();
    places.dedup();

    let mut certificate = Vec::new();
    for place in places {
        let (rel, bound) = match targets.get(&place) {
            Some(t) => (relation, t),
            None => (Relation::AtLeast, 1.0),
        };
        match profiles.get(&place) {
            Some(prof) => {
                for e in &prof.entries {
                    certificate.push(compare_entry(place, e, rel, bound));
                }
            }
            None => {
                let e = match place {
                    Place::Finite(p) => ProfileEntry::p_adic(p, Ratio::zero(), Ratio::from_integer(1)),
                    Place::Infinity => unit.clone(),
                };
                certificate.push(compare_entry(place, &e, rel, bound));
            }
        }
    }
    Ok(KroneckerVerdict {
        attains_minimum: certificate.iter().all(|row| row.satisfied),
        certificate,
        essential_minimum: essential_minimum(r)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonBounds {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

/// The sandwich `h + h(∞) + Σ min{0, f_r(0)} ≤ h_{ρ_r} ≤ h + h_{ρ_r}(1)`.
pub fn comparison_bounds(alpha: &AlgebraicNumber, r: &RadiusProfile, tol: f64) -> Result<ComparisonBounds> {
    let h = weil_height(alpha, tol)?.total;
    let h_inf = areal_h_infinity(r);
    let lower = h + h_inf + r.iter().map(|(_, &rv)| f_r(rv, 0.0).min(0.0)).sum::<f64>();
    let upper = h + h_inf + r.iter().map(|(_, &rv)| f_r(rv, 1.0)).sum::<f64>();
    let value = areal_height(alpha, r, tol)?.total;
    Ok(ComparisonBounds { lower, upper, value })
}
