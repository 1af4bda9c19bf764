//! Exact coefficient domains.
//!
//! Two domains are supported: the rationals, and univariate polynomials in a
//! formal parameter `δ` with rational coefficients. A polynomial carries its
//! domain in its type, so rational and `δ`-valued polynomials cannot be mixed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Exact rational number.
pub type Rational = BigRational;

/// Builds a rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Coefficient ring of a polynomial.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn to_scalar(&self) -> Scalar;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(rat(n))
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Rational(self.clone())
    }
}

/// Polynomial in `δ` with rational coefficients; `coeffs[k]` multiplies `δ^k`.
///
/// Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DeltaPoly {
    coeffs: Vec<Rational>,
}

impl DeltaPoly {
    pub fn constant(q: Rational) -> Self {
        let mut p = DeltaPoly { coeffs: vec![q] };
        p.trim();
        p
    }

    /// The parameter `δ` itself.
    pub fn delta() -> Self {
        DeltaPoly {
            coeffs: vec![rat(0), rat(1)],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = DeltaPoly { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree in `δ`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow_delta(k: usize) -> Self {
        let mut coeffs = vec![rat(0); k + 1];
        coeffs[k] = rat(1);
        DeltaPoly { coeffs }
    }

    /// Specializes `δ` to a rational value.
    pub fn eval_at(&self, value: &Rational) -> Rational {
        let mut acc = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * value + c;
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let mut out = self.clone();
        Coeff::add_assign(&mut out, rhs);
        out
    }
}

impl Sub for &DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        let mut out = self.clone();
        Coeff::add_assign(&mut out, &Coeff::neg(rhs));
        out
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        Coeff::mul(self, rhs)
    }
}

impl Neg for &DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        Coeff::neg(self)
    }
}

impl Coeff for DeltaPoly {
    fn zero() -> Self {
        DeltaPoly::default()
    }
    fn one() -> Self {
        DeltaPoly::constant(rat(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_assign(&mut self, rhs: &Self) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), rat(0));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return DeltaPoly::default();
        }
        let mut coeffs = vec![rat(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        DeltaPoly::from_coeffs(coeffs)
    }
    fn neg(&self) -> Self {
        DeltaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn from_rational(q: Rational) -> Self {
        DeltaPoly::constant(q)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Delta(self.clone())
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = magnitude.is_one();
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !unit {
                        write!(f, "{magnitude}*")?;
                    }
                    write!(f, "delta")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A coefficient value detached from its domain, used in reports.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rational(Rational),
    Delta(DeltaPoly),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Delta(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Serializes a rational as its text form, e.g. `"-3/2"`.
pub fn serialize_rational<S: Serializer>(q: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(q)
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

/// Binomial coefficient `C(n, k)` as an integer.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_arithmetic() {
        let d = DeltaPoly::delta();
        let one = <DeltaPoly as Coeff>::one();
        let p = &d + &one;
        let sq = &p * &p;
        assert_eq!(sq.coeffs(), &[rat(1), rat(2), rat(1)]);
        assert_eq!(sq.eval_at(&rat(2)), rat(9));
        assert!(Coeff::is_zero(&(&p - &p)));
        assert_eq!(sq.to_string(), "delta^2 + 2*delta + 1");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(9, 5), 126);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(factorial(4), rat(24));
    }
}
