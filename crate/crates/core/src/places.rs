//! Places of ℚ and the weighted absolute-value profiles of a conjugate set.
//!
//! For α with conjugates α_1, …, α_n, the profile at a place v is the
//! multiset {(|α_k|_v, 1/n)}. Over ℚ this carries the same information as
//! the pairs (|α|_w, n_w) over the places w | v of ℚ(α), and it is all the
//! height formulas need.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polyalg::{
    complex_roots, newton_polygon, prime_divisors, squarefree_part, IntPolynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if crate::polyalg::is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::invalid(format!("place {p} is not a prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(*p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Place::Infinity),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad place {t:?}")))?;
                Place::finite(p)
            }
        }
    }
}

impl serde::Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One conjugate's absolute value at a place, with its weight.
///
/// At a finite place `value = p^exponent` and the exponent is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileEntry {
    pub value: f64,
    pub log_value: f64,
    pub exponent: Option<Ratio<i64>>,
    pub weight: Ratio<i64>,
}

impl ProfileEntry {
    pub fn archimedean(value: f64, weight: Ratio<i64>) -> Self {
        ProfileEntry {
            value,
            log_value: value.ln(),
            exponent: None,
            weight,
        }
    }

    pub fn p_adic(p: u64, exponent: Ratio<i64>, weight: Ratio<i64>) -> Self {
        let log_value = ratio_to_f64(exponent) * (p as f64).ln();
        ProfileEntry {
            value: log_value.exp(),
            log_value,
            exponent: Some(exponent),
            weight,
        }
    }

    pub fn weight_f64(&self) -> f64 {
        ratio_to_f64(self.weight)
    }
}

pub(crate) fn ratio_to_f64(q: Ratio<i64>) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalValueProfile {
    pub place: Place,
    pub entries: Vec<ProfileEntry>,
}

impl LocalValueProfile {
    pub fn weight_sum(&self) -> Ratio<i64> {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// `Σ weight · g(|α|)` over the entries.
    pub fn integrate(&self, mut g: impl FnMut(&ProfileEntry) -> f64) -> f64 {
        self.entries.iter().map(|e| e.weight_f64() * g(e)).sum()
    }

    /// `Σ weight · exponent` at a finite place, exactly.
    pub fn exponent_sum(&self) -> Option<Ratio<i64>> {
        self.entries
            .iter()
            .map(|e| e.exponent.map(|q| q * e.weight))
            .sum()
    }
}

pub type ProfileMap = BTreeMap<Place, LocalValueProfile>;

/// An element of P¹(ℚ̄) given by its conjugate set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicNumber {
    Zero,
    Infinity,
    /// All roots of a primitive squarefree polynomial. For a minimal
    /// polynomial this is the conjugate set; a forced reducible input is
    /// averaged over every root, which may include 0.
    Roots(IntPolynomial),
}

impl AlgebraicNumber {
    /// The number whose minimal polynomial is `p`.
    ///
    /// Irreducibility is not decided in general. Polynomials that fail the
    /// squarefree check or the rational root test are refused.
    pub fn from_minimal_polynomial(p: &IntPolynomial) -> Result<Self> {
        let n = p
            .degree()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::invalid("minimal polynomial must have degree >= 1"))?;
        if n == 1 {
            return Ok(Self::from_linear(p));
        }
        if !p.is_squarefree() {
            return Err(Error::invalid(format!("polynomial {p} is not squarefree")));
        }
        if p.has_rational_root() == Some(true) {
            return Err(Error::invalid(format!("polynomial {p} has a rational root")));
        }
        Ok(AlgebraicNumber::Roots(p.primitive_part()))
    }

    /// Averages over all roots of `p` without checking irreducibility.
    pub fn forced(p: &IntPolynomial) -> Result<Self> {
        let sf = squarefree_part(p)?;
        if sf.degree() == Some(1) {
            return Ok(Self::from_linear(&sf));
        }
        Ok(AlgebraicNumber::Roots(sf))
    }

    pub fn rational(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        if num.is_zero() {
            return Ok(AlgebraicNumber::Zero);
        }
        Ok(AlgebraicNumber::Roots(
            IntPolynomial::linear_for_rational(num, den).primitive_part(),
        ))
    }

    fn from_linear(p: &IntPolynomial) -> Self {
        if p.coeff(0).is_zero() {
            AlgebraicNumber::Zero
        } else {
            AlgebraicNumber::Roots(p.primitive_part())
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AlgebraicNumber::Roots(p) => p.degree().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn polynomial(&self) -> Option<&IntPolynomial> {
        match self {
            AlgebraicNumber::Roots(p) => Some(p),
            _ => None,
        }
    }
}

impl FromStr for AlgebraicNumber {
    type Err = Error;

    /// Accepts `inf`, an integer, or a fraction `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "infinity") {
            return Ok(AlgebraicNumber::Infinity);
        }
        if t.contains("/") {
            let (n, d) = t.split_once('/').unwrap();
            let num: BigInt = n.trim().parse().map_err(|_| Error::invalid(format!("bad rational {t:?}")))?;
            let den: BigInt = d.trim().parse().map_err(|_| Error::invalid(format!("bad rational {t:?}")))?;
            return AlgebraicNumber::rational(&num, &den);
        }
        let num: BigInt = t.parse().map_err(|_| Error::invalid(format!("bad number {t:?}")))?;
        AlgebraicNumber::rational(&num, &BigInt::one())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::Zero => write!(f, "0"),
            AlgebraicNumber::Infinity => write!(f, "inf"),
            AlgebraicNumber::Roots(p) if p.degree() == Some(1) => {
                let q = BigRational::new(-p.coeff(0), p.coeff(1));
                write!(f, "{q}")
            }
            AlgebraicNumber::Roots(p) => write!(f, "root of {p}"),
        }
    }
}

/// Per-place profiles of the conjugates of `alpha`.
///
/// The archimedean profile always appears. Finite places are drawn from the
/// primes dividing `a_0 · a_n`; those where every root is a unit are omitted.
pub fn local_profiles(alpha: &AlgebraicNumber, tol: f64) -> Result<ProfileMap> {
    let p = match alpha {
        AlgebraicNumber::Roots(p) => p,
        _ => return Err(Error::Domain(format!("no local profile for {alpha}"))),
    };
    if p.coeff(0).is_zero() {
        return Err(Error::Domain("conjugate set contains 0".into()));
    }
    let n = p.degree().unwrap_or(0);
    let n_i64 = i64::try_from(n).map_err(|_| Error::invalid("degree too large"))?;
    let unit = Ratio::new(1, n_i64);

    let mut map = ProfileMap::new();
    let roots = complex_roots(p, tol)?;
    map.insert(
        Place::Infinity,
        LocalValueProfile {
            place: Place::Infinity,
            entries: roots
                .iter()
                .map(|z| ProfileEntry::archimedean(z.norm(), unit))
                .collect(),
        },
    );

    let mut primes = prime_divisors(&p.coeff(0))?;
    primes.extend(prime_divisors(p.leading().unwrap())?);
    primes.sort_unstable();
    primes.dedup();
    for prime in primes {
        let np = newton_polygon(p, prime)?;
        if np.slopes.iter().all(|(s, _)| s.is_zero()) {
            continue;
        }
        let place = Place::Finite(prime);
        let entries = np
            .slopes
            .iter()
            .map(|&(s, m)| ProfileEntry::p_adic(prime, s, Ratio::new(m as i64, n_i64)))
            .collect();
        map.insert(place, LocalValueProfile { place, entries });
    }
    Ok(map)
}

/// `Σ_v Σ weight · log|α|_v`, which vanishes by the product formula.
pub fn product_formula_sum(profiles: &ProfileMap) -> f64 {
    profiles
        .values()
        .map(|prof| prof.integrate(|e| e.log_value))
        .sum()
}

/// JSON form: archimedean rows `[value, w_num, w_den]`, finite rows
/// `[exp_num, exp_den, w_num, w_den]`, keyed by place.
pub fn profiles_to_json(profiles: &ProfileMap) -> Value {
    let mut obj = serde_json::Map::new();
    for (place, prof) in profiles {
        let rows: Vec<Value> = prof
            .entries
            .iter()
            .map(|e| match e.exponent {
                None => json!([e.value, e.weight.numer(), e.weight.denom()]),
                Some(q) => json!([q.numer(), q.denom(), e.weight.numer(), e.weight.denom()]),
            })
            .collect();
        obj.insert(place.to_string(), Value::Array(rows));
    }
    Value::Object(obj)
}

pub fn profiles_from_json(value: &Value) -> Result<ProfileMap> {
    let bad = || Error::invalid("malformed profile JSON");
    let obj = value.as_object().ok_or_else(bad)?;
    let int = |v: &Value| v.as_i64().ok_or_else(bad);
    let ratio = |n: &Value, d: &Value| -> Result<Ratio<i64>> {
        let d = int(d)?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Ratio::new(int(n)?, d))
    };
    let mut map = ProfileMap::new();
    for (key, rows) in obj {
        let place: Place = key.parse()?;
        let rows = rows.as_array().ok_or_else(bad)?;
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(bad)?;
            let entry = match (place, row.len()) {
                (Place::Infinity, 3) => ProfileEntry::archimedean(
                    row[0].as_f64().filter(|v| *v >= 0.0).ok_or_else(bad)?,
                    ratio(&row[1], &row[2])?,
                ),
                (Place::Finite(p), 4) => {
                    ProfileEntry::p_adic(p, ratio(&row[0], &row[1])?, ratio(&row[2], &row[3])?)
                }
                _ => return Err(bad()),
            };
            if !entry.weight.is_positive() {
                return Err(bad());
            }
            entries.push(entry);
        }
        let prof = LocalValueProfile { place, entries };
        if prof.weight_sum() != Ratio::one() {
            return Err(Error::invalid(format!("weights at {place} do not sum to 1")));
        }
        map.insert(place, prof);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::DEFAULT_ROOT_TOL;

    fn alpha(c: &[i64]) -> AlgebraicNumber {
        AlgebraicNumber::from_minimal_polynomial(&IntPolynomial::from_i64s(c)).unwrap()
    }

    #[test]
    fn golden_ratio_is_a_unit() {
        let m = local_profiles(&alpha(&[-1, -1, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(m.len(), 1);
        let inf = &m[&Place::Infinity];
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((inf.entries[0].value - (phi - 1.0)).abs() < 1e-15);
        assert!((inf.entries[1].value - phi).abs() < 1e-15);
        assert_eq!(inf.entries[0].weight, Ratio::new(1, 2));
    }

    #[test]
    fn one_half() {
        let a: AlgebraicNumber = "1/2".parse().unwrap();
        let m = local_profiles(&a, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(m[&Place::Infinity].entries[0].value, 0.5);
        let two = &m[&Place::Finite(2)];
        assert_eq!(two.entries.len(), 1);
        assert_eq!(two.entries[0].exponent, Some(Ratio::from_integer(1)));
        assert_eq!(two.entries[0].value, 2.0);
        assert_eq!(two.weight_sum(), Ratio::one());
    }

    #[test]
    fn sqrt_two() {
        let m = local_profiles(&alpha(&[-2, 0, 1]), DEFAULT_ROOT_TOL).unwrap();
        for e in &m[&Place::Infinity].entries {
            assert!((e.value - 2f64.sqrt()).abs() < 1e-15);
        }
        let two = &m[&Place::Finite(2)];
        assert_eq!(two.entries.len(), 1);
        assert_eq!(two.entries[0].exponent, Some(Ratio::new(-1, 2)));
        assert!((two.entries[0].value - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trivial_primes_are_omitted() {
        // 2x^2 + x + 2 has a_0 a_n = 4 but nontrivial 2-adic slopes -1, 1
        let m = local_profiles(&alpha(&[2, 1, 2]), DEFAULT_ROOT_TOL).unwrap();
        assert!(m.contains_key(&Place::Finite(2)));
        // 3x^2 + x + 3 at p = 3 likewise; 5x^2 + 5x + 1 at 5 is not trivial either
        let m = local_profiles(&alpha(&[1, 1, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn refuses_reducible() {
        let p = IntPolynomial::from_i64s(&[1, 5, 6]);
        assert!(AlgebraicNumber::from_minimal_polynomial(&p).is_err());
        let p = IntPolynomial::from_i64s(&[1, -2, 1]);
        assert!(AlgebraicNumber::from_minimal_polynomial(&p).is_err());
        let forced = AlgebraicNumber::forced(&p).unwrap();
        assert_eq!(forced, "1".parse().unwrap());
    }

    #[test]
    fn parses_special_values() {
        assert_eq!("0".parse::<AlgebraicNumber>().unwrap(), AlgebraicNumber::Zero);
        assert_eq!("inf".parse::<AlgebraicNumber>().unwrap(), AlgebraicNumber::Infinity);
        assert_eq!("-4/6".parse::<AlgebraicNumber>().unwrap().to_string(), "-2/3");
        assert!("1/0".parse::<AlgebraicNumber>().is_err());
        assert!(local_profiles(&AlgebraicNumber::Zero, 1e-13).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = local_profiles(&alpha(&[-2, 0, 3]), DEFAULT_ROOT_TOL).unwrap();
        let v = profiles_to_json(&m);
        assert!(v["3"].is_array());
        let back = profiles_from_json(&v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_bad_weights() {
        let v = json!({"inf": [[1.0, 1, 3]]});
        assert!(profiles_from_json(&v).is_err());
        let v = json!({"4": [[1, 1, 1, 1]]});
        assert!(profiles_from_json(&v).is_err());
    }

    #[test]
    fn product_formula_small_cases() {
        for c in [&[-1, -1, 1][..], &[-1, 2], &[-2, 0, 1], &[3, -7, 0, 12], &[1, 5, 0, 0, 9]] {
            let m = local_profiles(&alpha(c), DEFAULT_ROOT_TOL).unwrap();
            assert!(product_formula_sum(&m).abs() < 1e-13, "{c:?}");
        }
    }
}
