//! Coefficient traits shared by every algebraic structure in the crate.
//!
//! Everything here is exact. The two concrete instances are [`Rational`]
//! (the constant field) and [`crate::RatFunc`] (the base field `Q(x)` with
//! `x' = 1`); polynomials, matrices and skew operators are generic over them.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// A commutative ring with identity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// Image of an integer under the unique ring map `Z -> Self`.
    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        let step = if n < 0 { -Self::one() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc + step.clone();
        }
        acc
    }
}

/// A field of characteristic zero containing `Q`.
pub trait Field: Ring + Display + std::ops::Div<Output = Self> + 'static {
    fn from_rational(q: Rational) -> Self;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self.clone()
    }

    /// `Some(q)` when the element is the constant `q`.
    fn to_rational(&self) -> Option<Rational>;

    /// The element a bare identifier denotes in the text grammar, if any
    /// (`x` for rational functions).
    fn base_variable(_name: &str) -> Option<Self> {
        None
    }
}

/// A field carrying a derivation.
pub trait DifferentialField: Field {
    fn derive(&self) -> Self;

    fn derive_n(&self, n: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }
}

impl Ring for Rational {
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Field for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Constants differentiate to zero.
impl DifferentialField for Rational {
    fn derive(&self) -> Self {
        Rational::zero()
    }
}

/// Builds a rational from a numerator/denominator pair of machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational the way the text grammar reads it back (`-7/2`, `3`).
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub(crate) fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

pub(crate) fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10, 1));
        assert_eq!(binomial(3, 0), rat(1, 1));
        assert_eq!(binomial(2, 3), rat(0, 1));
        assert_eq!(factorial(5), rat(120, 1));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(fmt_rational(&rat(-7, 2)), "-7/2");
        assert_eq!(fmt_rational(&rat(6, 3)), "2");
    }
}
