//! The base differential field `Q(x)` with `x' = 1`.

mod hermite;
mod poly;
mod zgcd;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::field::{DifferentialField, Field, Ring};
use crate::{Error, Rational};

pub use hermite::{
    antiderivative_in_field, hermite_reduce, rational_log_part, Antiderivative, LogTerm,
    SimplePoleObstruction,
};
pub use poly::Poly;

/// Univariate polynomial over the constants.
pub type UPoly = Poly<Rational>;

/// Element of `Q(x)` in canonical form: coprime parts, monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    /// Builds `num/den` and brings it to canonical form.
    pub fn new(num: UPoly, den: UPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(<Rational as Ring>::from_int(n))
    }

    pub fn x() -> Self {
        Self::from_poly(UPoly::x())
    }

    /// `x - c`
    pub fn x_minus(c: Rational) -> Self {
        Self::from_poly(UPoly::new(vec![-c, Rational::one()]))
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True when the denominator is a power of `x`, i.e. the element lies in `Q[x, 1/x]`.
    pub fn is_laurent_in_x(&self) -> bool {
        let d = self.den.deg();
        self.den == UPoly::monomial(Rational::one(), d)
    }

    pub fn as_polynomial(&self) -> Option<&UPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self, Error> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// Substitutes a rational value for `x`; `None` at a pole.
    pub fn eval(&self, at: &Rational) -> Option<Rational> {
        let d = self.den.eval(at);
        (!d.is_zero()).then(|| self.num.eval(at) / d)
    }

    /// Splits into polynomial part and proper part.
    pub fn split_polynomial(&self) -> (UPoly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den);
        (q, RatFunc { num: r, den: self.den.clone() })
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: UPoly::zero(), den: UPoly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: UPoly::one(), den: UPoly::one() }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        RatFunc::normalized(&(&self.num * &b) + &(&rhs.num * &a), &a * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl Ring for RatFunc {
    fn from_int(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl Field for RatFunc {
    fn from_rational(q: Rational) -> Self {
        RatFunc::constant(q)
    }

    fn inv(&self) -> Self {
        self.recip().expect("inverse of zero")
    }

    fn to_rational(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    fn base_variable(name: &str) -> Option<Self> {
        (name == "x").then(RatFunc::x)
    }
}

impl DifferentialField for RatFunc {
    /// Quotient rule `(n'd - nd')/d^2` for `x' = 1`.
    fn derive(&self) -> Self {
        if self.den.is_constant() {
            return RatFunc::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::normalized(num, &self.den * &self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let simple_num = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && !crate::field::is_negative(&self.num.leading_coeff());
        if simple_num && self.num.is_constant() {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        crate::parse::parse_ratfunc(s)
    }
}

/// Parses a rational function, panicking on malformed input. For tests and literals.
pub fn rf(s: &str) -> RatFunc {
    s.parse().unwrap_or_else(|e| panic!("bad rational function {s:?}: {e}"))
}

/// Squarefree decomposition, highest multiplicity first.
pub fn squarefree_part(p: &UPoly) -> Result<Vec<(UPoly, u32)>, Error> {
    let mut parts = p.squarefree()?;
    parts.reverse();
    Ok(parts)
}
