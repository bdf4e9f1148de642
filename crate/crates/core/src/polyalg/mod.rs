//! Exact integer polynomials and the root data derived from them.
//!
//! [`IntPolynomial`] stores arbitrary-precision coefficients in ascending
//! degree order. Complex roots come from [`complex_roots`] and p-adic root
//! valuations from [`newton_polygon`]; together they supply every local
//! absolute value the height formulas consume.

pub(crate) mod newton;
mod roots;

pub use newton::{newton_polygon, NewtonPolygon};
pub use roots::{backward_error, complex_roots, DEFAULT_ROOT_TOL, MAX_ROOT_ITERATIONS};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial with exact integer coefficients, `coeffs[i]` multiplying `x^i`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `den * x - num`, the minimal polynomial of the rational `num / den`
    /// up to content.
    pub fn linear_for_rational(num: &BigInt, den: &BigInt) -> Self {
        Self::new(vec![-num.clone(), den.clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Number of roots at zero (the index of the lowest nonzero coefficient).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Removes the factor `x^k` carrying the roots at zero.
    pub fn strip_zero_roots(&self) -> IntPolynomial {
        let k = self.zero_root_multiplicity();
        IntPolynomial {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn derivative(&self) -> IntPolynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Exact quotient `self / divisor` over the integers.
    ///
    /// Fails if the division leaves a remainder or a non-integral quotient.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dn = divisor
            .degree()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n = self.degree().unwrap();
        if n < dn {
            return Err(Error::invalid("inexact polynomial division"));
        }
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - dn + 1];
        for k in (0..=n - dn).rev() {
            let top = &rem[k + dn];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return Err(Error::invalid("inexact polynomial division"));
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::invalid("inexact polynomial division"));
        }
        Ok(Self::new(quot))
    }

    /// Remainder of `self` by `divisor` after scaling by powers of the
    /// divisor's leading coefficient (a pseudo-remainder up to a unit of Q).
    fn pseudo_rem(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let dn = divisor.degree().expect("nonzero divisor");
        let lc = divisor.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(rn) = r.degree() {
            if rn < dn {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shift = rn - dn;
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                coeffs[shift + j] -= &lr * d;
            }
            r = Self::new(coeffs).primitive_part();
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree().is_some_and(|_| self.gcd(&self.derivative()).degree() == Some(0))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Coefficients as `f64`, failing if any of them overflows.
    pub fn to_f64_coeffs(&self) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| match c.to_f64() {
                Some(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Numeric {
                    message: format!("coefficient {c} does not fit in double precision"),
                    residual: f64::INFINITY,
                }),
            })
            .collect()
    }

    /// Whether the polynomial has a rational root, decided by the rational
    /// root test. `None` when the end coefficients are too large to factor.
    pub fn has_rational_root(&self) -> Option<bool> {
        let n = self.degree()?;
        if n == 0 {
            return Some(false);
        }
        if self.coeffs[0].is_zero() {
            return Some(true);
        }
        let a0 = self.coeffs[0].abs().to_u64()?;
        let an = self.coeffs[n].abs().to_u64()?;
        let nums = divisors(a0);
        let dens = divisors(an);
        for p in &nums {
            for q in &dens {
                if p.gcd(q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    if self.vanishes_at_rational(&(BigInt::from(*p) * sign), &BigInt::from(*q)) {
                        return Some(true);
                    }
                }
            }
        }
        Some(false)
    }

    fn vanishes_at_rational(&self, p: &BigInt, q: &BigInt) -> bool {
        // sum a_i p^i q^(n-i)
        let n = self.coeffs.len() - 1;
        let mut acc = BigInt::zero();
        let mut p_pow = BigInt::one();
        let q_pows: Vec<BigInt> = (0..=n).scan(BigInt::one(), |s, _| {
            let cur = s.clone();
            *s *= q;
            Some(cur)
        }).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            acc += a * &p_pow * &q_pows[n - i];
            p_pow *= p;
        }
        acc.is_zero()
    }

    /// The `n`-th cyclotomic polynomial, by exact division of `x^n - 1`.
    pub fn cyclotomic(n: usize) -> Result<IntPolynomial> {
        if n == 0 {
            return Err(Error::invalid("cyclotomic index must be positive"));
        }
        let mut cache: BTreeMap<usize, IntPolynomial> = BTreeMap::new();
        cyclotomic_cached(n, &mut cache)
    }
}

fn cyclotomic_cached(n: usize, cache: &mut BTreeMap<usize, IntPolynomial>) -> Result<IntPolynomial> {
    if let Some(p) = cache.get(&n) {
        return Ok(p.clone());
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n] = BigInt::one();
    let mut p = IntPolynomial::new(coeffs);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_cached(d, cache)?;
            p = p.div_exact(&phi_d)?;
        }
    }
    cache.insert(n, p.clone());
    Ok(p)
}

/// Positive divisors of `n` (n > 0), ascending.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in prime_factors(n) {
        let current = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(current.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Prime factorization of `n` as (prime, exponent) pairs.
pub(crate) fn prime_factors(n: u64) -> Vec<(u64, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n).into_iter().collect()
}

/// Distinct prime divisors of a nonzero integer of any size, ascending.
pub(crate) fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.magnitude();
    if let Some(small) = n.to_u64() {
        return Ok(prime_factors(small).into_iter().map(|(p, _)| p).collect());
    }
    num_prime::nt_funcs::factorize(n.clone())
        .into_keys()
        .map(|p| {
            p.to_u64()
                .ok_or_else(|| Error::invalid(format!("prime factor {p} exceeds 64 bits")))
        })
        .collect()
}

pub(crate) fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// Squarefree part `P / gcd(P, P')`, primitive with positive leading coefficient.
pub fn squarefree_part(p: &IntPolynomial) -> Result<IntPolynomial> {
    match p.degree() {
        None => Err(Error::invalid("squarefree part of the zero polynomial")),
        Some(0) => Err(Error::invalid("squarefree part requires degree >= 1")),
        Some(_) => {
            let prim = p.primitive_part();
            let g = prim.gcd(&prim.derivative());
            Ok(prim.div_exact(&g)?.primitive_part())
        }
    }
}

/// Yun decomposition of a nonconstant polynomial into primitive squarefree
/// factors with multiplicities, `P = c * prod f_i^i`.
pub fn squarefree_decomposition(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, usize)>> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::invalid("squarefree decomposition requires degree >= 1"));
    }
    let f = p.primitive_part();
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut c = f.div_exact(&g)?;
    let mut d = df.div_exact(&g)?.sub(&c.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        let next_c = c.div_exact(&a)?;
        d = d.div_exact(&a)?.sub(&next_c.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        c = next_c;
        i += 1;
    }
    Ok(out)
}

/// Content (positive gcd of coefficients) and leading coefficient.
pub fn content_and_leading(p: &IntPolynomial) -> Result<(BigInt, BigInt)> {
    let lead = p
        .leading()
        .cloned()
        .ok_or_else(|| Error::invalid("content of the zero polynomial"))?;
    Ok((p.content().abs(), lead))
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses comma-separated ascending coefficients, e.g. `"-1,-1,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::invalid(format!("bad polynomial coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = IntPolynomial::new(coeffs);
        if p.is_zero() {
            return Err(Error::invalid("polynomial is zero"));
        }
        Ok(p)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}
