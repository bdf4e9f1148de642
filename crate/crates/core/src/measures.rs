//! Archimedean measures, their potentials and energies, and radius profiles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::places::Place;

/// Potential of the normalized area measure on the disk of radius `r`,
/// as a function of `x = |z|`.
pub fn f_r(r: f64, x: f64) -> f64 {
    if x <= r {
        r.ln() - 0.5 + x * x / (2.0 * r * r)
    } else {
        x.ln()
    }
}

/// `d f_r / dx`.
pub fn f_r_derivative(r: f64, x: f64) -> f64 {
    if x <= r {
        x / (r * r)
    } else {
        1.0 / x
    }
}

/// `d f_r(x) / dr` at fixed `x`.
pub fn f_r_radius_derivative(r: f64, x: f64) -> f64 {
    if x <= r {
        1.0 / r - x * x / (r * r * r)
    } else {
        0.0
    }
}

/// Radii `r_v > 0` indexed by a nonempty finite set `S` of places.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    radii: BTreeMap<Place, f64>,
}

impl RadiusProfile {
    pub fn new(radii: BTreeMap<Place, f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::invalid("radius profile needs at least one place"));
        }
        for (place, &r) in &radii {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid(format!("radius at {place} must be positive, got {r}")));
            }
        }
        Ok(RadiusProfile { radii })
    }

    /// `S = {∞}` with the given radius.
    pub fn archimedean(r: f64) -> Result<Self> {
        Self::new(BTreeMap::from([(Place::Infinity, r)]))
    }

    pub fn get(&self, place: &Place) -> Option<f64> {
        self.radii.get(place).copied()
    }

    pub fn contains(&self, place: &Place) -> bool {
        self.radii.contains_key(place)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &f64)> {
        self.radii.iter()
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.radii.keys()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `γ(r) = ∏ r_v`.
    pub fn gamma(&self) -> f64 {
        self.log_gamma().exp()
    }

    pub fn log_gamma(&self) -> f64 {
        self.radii.values().map(|r| r.ln()).sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.radii.iter().map(|(&p, &r)| (p, c * r)).collect())
    }
}

impl FromStr for RadiusProfile {
    type Err = Error;

    /// Parses `"inf:1.0,2:0.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut radii = BTreeMap::new();
        for item in s.split(',') {
            let (place, r) = item
                .split_once(':')
                .ok_or_else(|| Error::invalid(format!("expected place:radius, got {item:?}")))?;
            let place: Place = place.parse()?;
            let r: f64 = r
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad radius {r:?}")))?;
            if radii.insert(place, r).is_some() {
                return Err(Error::invalid(format!("place {place} given twice")));
            }
        }
        Self::new(radii)
    }
}

impl fmt::Display for RadiusProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.radii.iter().map(|(p, r)| format!("{p}:{r}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Archimedean probability measures on ℂ.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSpec {
    /// Normalized area measure on the disk `|z| ≤ R`.
    ArealDisk(f64),
    /// Normalized arc length on the circle `|z| = t`.
    Circle(f64),
    /// `dx / (π √(4 − x²))` on `[−2, 2]`.
    ChebyshevEquilibrium,
    /// Finitely many atoms with weights summing to one.
    PointMassSet(Vec<(Complex64, f64)>),
}

impl MeasureSpec {
    pub fn areal(r: f64) -> Result<Self> {
        positive(r, "disk radius").map(MeasureSpec::ArealDisk)
    }

    pub fn circle(t: f64) -> Result<Self> {
        positive(t, "circle radius").map(MeasureSpec::Circle)
    }

    pub fn point_masses(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("point mass set is empty"));
        }
        if atoms.iter().any(|(z, w)| !(z.is_finite() && *w > 0.0 && w.is_finite())) {
            return Err(Error::invalid("point masses need finite atoms and positive weights"));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("point mass weights sum to {total}, not 1")));
        }
        Ok(MeasureSpec::PointMassSet(atoms))
    }

    /// Uniform weights on the given atoms.
    pub fn uniform_points(points: &[Complex64]) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        Self::point_masses(points.iter().map(|&z| (z, w)).collect())
    }

    /// Parses `re,im,weight` rows; blank lines and `#` comments are skipped.
    pub fn points_from_csv(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::invalid(format!("line {}: expected numbers", lineno + 1)))?;
            if fields.len() != 3 {
                return Err(Error::invalid(format!("line {}: expected re,im,weight", lineno + 1)));
            }
            atoms.push((Complex64::new(fields[0], fields[1]), fields[2]));
        }
        Self::point_masses(atoms)
    }

    /// Whether the potential depends only on `|z|`.
    pub fn is_radial(&self) -> bool {
        matches!(self, MeasureSpec::ArealDisk(_) | MeasureSpec::Circle(_))
    }

    /// `p_μ(z) = ∫ log|z − w| dμ(w)`. Returns `-∞` at an atom.
    pub fn potential(&self, z: Complex64) -> f64 {
        match self {
            MeasureSpec::ArealDisk(r) => f_r(*r, z.norm()),
            MeasureSpec::Circle(t) => t.max(z.norm()).ln(),
            MeasureSpec::ChebyshevEquilibrium => chebyshev_green(z),
            MeasureSpec::PointMassSet(atoms) => atoms
                .iter()
                .map(|(a, w)| w * (z - a).norm().ln())
                .sum(),
        }
    }

    /// `(μ, μ) = −∬ log|z − w| dμ dμ`.
    pub fn energy(&self) -> Result<f64> {
        match self {
            MeasureSpec::ArealDisk(r) => Ok(0.25 - r.ln()),
            MeasureSpec::Circle(t) => Ok(-t.ln()),
            MeasureSpec::ChebyshevEquilibrium => Ok(0.0),
            MeasureSpec::PointMassSet(_) => Err(Error::UnsupportedMeasure(
                "self-energy of a point mass set is not defined".into(),
            )),
        }
    }

    /// `μ({|z| ≤ s})`.
    pub fn radial_cdf(&self, s: f64) -> Result<f64> {
        match self {
            MeasureSpec::ArealDisk(r) => Ok((s * s / (r * r)).min(1.0)),
            MeasureSpec::Circle(t) => Ok(if s < *t { 0.0 } else { 1.0 }),
            _ => Err(Error::UnsupportedMeasure(format!("no radial distribution for {self}"))),
        }
    }
}

fn positive(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(format!("{what} must be positive, got {x}")))
    }
}

/// Green's function of `[−2, 2]` with pole at infinity,
/// `log |(z + √(z² − 4)) / 2|` on the branch of modulus at least 2.
fn chebyshev_green(z: Complex64) -> f64 {
    let s = (z * z - 4.0).sqrt();
    let w = (z + s).norm().max((z - s).norm());
    (w / 2.0).ln().max(0.0)
}

impl FromStr for MeasureSpec {
    type Err = Error;

    /// `areal:R`, `circle:t`, `chebyshev`, or `points:FILE`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "chebyshev" {
            return Ok(MeasureSpec::ChebyshevEquilibrium);
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("unknown measure {s:?}")))?;
        let num = || {
            arg.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad measure parameter {arg:?}")))
        };
        match kind {
            "areal" => MeasureSpec::areal(num()?),
            "circle" => MeasureSpec::circle(num()?),
            "points" => {
                let text = std::fs::read_to_string(arg)
                    .map_err(|e| Error::invalid(format!("cannot read {arg}: {e}")))?;
                MeasureSpec::points_from_csv(&text)
            }
            _ => Err(Error::invalid(format!("unknown measure {s:?}"))),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::ArealDisk(r) => write!(f, "areal:{r}"),
            MeasureSpec::Circle(t) => write!(f, "circle:{t}"),
            MeasureSpec::ChebyshevEquilibrium => write!(f, "chebyshev"),
            MeasureSpec::PointMassSet(atoms) => write!(f, "points[{}]", atoms.len()),
        }
    }
}
