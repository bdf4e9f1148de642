use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{is_prime, IntPolynomial};
use crate::error::{Error, Result};

/// Lower convex hull of the points `(i, v_p(a_i))`.
///
/// A segment of slope `s` spanning `m` indices carries `m` roots of
/// p-adic valuation `-s`, so each such root has `|root|_p = p^s`.
/// Roots at zero are kept out of the hull and counted in `zero_roots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub vertices: Vec<(usize, Ratio<i64>)>,
    pub slopes: Vec<(Ratio<i64>, usize)>,
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// `(valuation, multiplicity)` of the nonzero roots, by increasing slope.
    pub fn root_valuations(&self) -> Vec<(Ratio<i64>, usize)> {
        self.slopes.iter().map(|&(s, m)| (-s, m)).collect()
    }

    /// Sum of `multiplicity * slope` over all segments.
    pub fn total_rise(&self) -> Ratio<i64> {
        self.slopes
            .iter()
            .fold(Ratio::zero(), |acc, &(s, m)| acc + s * Ratio::from_integer(m as i64))
    }
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn valuation(a: &BigInt, p: u64) -> i64 {
    debug_assert!(!a.is_zero());
    let p = BigInt::from(p);
    let mut a = a.abs();
    let mut v = 0;
    loop {
        let (q, r) = a.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        a = q;
        v += 1;
    }
}

pub fn newton_polygon(poly: &IntPolynomial, p: u64) -> Result<NewtonPolygon> {
    if poly.is_zero() {
        return Err(Error::invalid("Newton polygon of the zero polynomial"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let zero_roots = poly.zero_root_multiplicity();
    let points: Vec<(i64, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, valuation(c, p)))
        .collect();

    // Monotone chain, lower hull only. Collinear points are dropped so that
    // consecutive slopes are strictly increasing.
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 - x1) * (pt.1 - y1) - (y2 - y1) * (pt.0 - x1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let vertices = hull
        .iter()
        .map(|&(i, v)| (i as usize, Ratio::from_integer(v)))
        .collect();
    let slopes = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            (Ratio::new(y2 - y1, x2 - x1), (x2 - x1) as usize)
        })
        .collect();
    Ok(NewtonPolygon {
        prime: p,
        vertices,
        slopes,
        zero_roots,
    })
}
