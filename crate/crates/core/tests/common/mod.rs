//! Seeded random corpus shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use areal_heights::polyalg::squarefree_part;
use areal_heights::{AlgebraicNumber, IntPolynomial, Place, RadiusProfile};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_a4ea;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Degree 1..=12, coefficients in [−50, 50], nonzero constant and leading term.
pub fn random_polynomial(rng: &mut impl Rng) -> IntPolynomial {
    let n = rng.gen_range(1..=12usize);
    let mut c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-50..=50)).collect();
    while c[0] == 0 {
        c[0] = rng.gen_range(-50..=50);
    }
    while c[n] == 0 {
        c[n] = rng.gen_range(-50..=50);
    }
    IntPolynomial::from_i64s(&c)
}

/// The conjugate set of the squarefree part of a random polynomial.
pub fn random_number(rng: &mut impl Rng) -> (IntPolynomial, AlgebraicNumber) {
    let p = random_polynomial(rng);
    let alpha = AlgebraicNumber::forced(&squarefree_part(&p).unwrap()).unwrap();
    (p, alpha)
}

/// `|S|` in 1..=3 drawn from {∞, 2, 3, 5}, radii log-uniform on [e^{−3/2}, e^{3/2}].
pub fn random_profile(rng: &mut impl Rng) -> RadiusProfile {
    let mut places = [
        Place::Infinity,
        Place::Finite(2),
        Place::Finite(3),
        Place::Finite(5),
    ];
    places.shuffle(rng);
    let k = rng.gen_range(1..=3);
    let radii: BTreeMap<Place, f64> = places[..k]
        .iter()
        .map(|&p| (p, rng.gen_range(-1.5f64..1.5).exp()))
        .collect();
    RadiusProfile::new(radii).unwrap()
}

/// A random profile with `γ(r) > 1`.
pub fn random_profile_above(rng: &mut impl Rng) -> RadiusProfile {
    loop {
        let r = random_profile(rng);
        if r.log_gamma() > 0.05 {
            return r;
        }
    }
}

pub fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

pub fn number(c: &[i64]) -> AlgebraicNumber {
    AlgebraicNumber::from_minimal_polynomial(&poly(c)).unwrap()
}

pub fn profile(s: &str) -> RadiusProfile {
    s.parse().unwrap()
}
