use std::any::Any;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{fmt_rational, is_negative, Field, Ring};
use crate::{Error, Rational};

/// Dense univariate polynomial in `x` over a field, lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![K::zero(), K::one()] }
    }

    /// `c * x^k`
    pub fn monomial(c: K, k: usize) -> Self {
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; only for callers that already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().inv())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![K::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Formal derivative `d/dx`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * K::from_int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![K::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / K::from_int(i as i64 + 1));
        }
        Self::new(coeffs)
    }

    pub fn eval(&self, at: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at.clone() + c.clone();
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.deg();
        let lc_inv = divisor.leading_coeff().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lc_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = rem[k + j].clone() - c.clone() * dc.clone();
                rem[k + j] = t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let any = |p: &Self| (p as &dyn Any).downcast_ref::<Poly<Rational>>().cloned();
        if let (Some(a), Some(b)) = (any(self), any(other)) {
            let g: Box<dyn Any> = Box::new(super::zgcd::gcd(&a, &b));
            return *g.downcast::<Self>().expect("K is Rational");
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g = gcd(self, other)`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0 - q.clone() * s1.clone();
            s0 = std::mem::replace(&mut s1, s);
            let t = t0 - q * t1.clone();
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lc = r0.leading_coeff().inv();
        (r0.scale(&lc), s0.scale(&lc), t0.scale(&lc))
    }

    /// Solves `s*a + t*b = c` with `deg s < deg b` when `gcd(a, b) | c`.
    pub fn diophantine(a: &Self, b: &Self, c: &Self) -> Option<(Self, Self)> {
        let (g, s, t) = a.ext_gcd(b);
        let scale = c.div_exact(&g)?;
        let (s, t) = (s * scale.clone(), t * scale);
        if b.is_constant() {
            return Some((Self::zero(), c.scale(&b.leading_coeff().inv())));
        }
        let (q, s_red) = s.div_rem(b);
        let t_red = t + q * a.clone();
        Some((s_red, t_red))
    }

    /// Squarefree decomposition by Yun's algorithm.
    ///
    /// Returns pairwise coprime monic squarefree factors with their
    /// multiplicities; their product equals `self` up to the leading
    /// coefficient.
    pub fn squarefree(&self) -> Result<Vec<(Self, u32)>, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok(out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = c - b.derivative();
        let mut mult = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), mult));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = c - b.derivative();
            mult += 1;
        }
        Ok(out)
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_kernel(&self) -> Self {
        if self.is_constant() {
            return Self::one();
        }
        self.div_exact(&self.gcd(&self.derivative())).expect("gcd divides").monic()
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Rational> {
    /// Resultant of two polynomials by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> Rational {
        if self.is_zero() || other.is_zero() {
            return Rational::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = Rational::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                return acc * num_traits::pow(b.leading_coeff(), da);
            }
            let r = a.div_rem(&b).1;
            if r.is_zero() {
                return Rational::zero();
            }
            // res(a,b) = (-1)^(da*db) lc(b)^(da - dr) res(b, r)
            let dr = r.deg();
            if da * db % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.leading_coeff(), da - dr);
            a = b;
            b = r;
        }
    }
}

impl<K: Field> Zero for Poly<K> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<K: Field> One for Poly<K> {
    fn one() -> Self {
        Poly { coeffs: vec![K::one()] }
    }
}

impl<K: Field> Add for Poly<K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a, K: Field> Add<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<K: Field> Sub for Poly<K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a, K: Field> Sub<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<K: Field> Neg for Poly<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<K: Field> Mul for Poly<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, K: Field> Mul<&'a Poly<K>> for &'a Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = t;
            }
        }
        Poly::new(out)
    }
}

impl<K: Field> Ring for Poly<K> {}

impl fmt::Display for Poly<Rational> {
    /// Highest degree first, e.g. `x^2 - 3/2*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[2, 2])), p(&[1, 1]));
        let (g, s, t) = a.ext_gcd(&p(&[2, 1]));
        assert_eq!(g, Poly::one());
        assert_eq!(s * a + t * p(&[2, 1]), Poly::one());
    }

    #[test]
    fn squarefree_examples() {
        // x^2 (x+1)
        let f = p(&[0, 0, 1, 1]);
        assert_eq!(f.squarefree().unwrap(), vec![(p(&[1, 1]), 1), (p(&[0, 1]), 2)]);
        assert_eq!(p(&[0, 1]).squarefree().unwrap(), vec![(p(&[0, 1]), 1)]);
        // (x^2 - 1)^2 (x + 2)
        let g = p(&[-1, 0, 1]).pow(2) * p(&[2, 1]);
        assert_eq!(g.squarefree().unwrap(), vec![(p(&[2, 1]), 1), (p(&[-1, 0, 1]), 2)]);
        assert!(matches!(Poly::<Rational>::zero().squarefree(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn resultant_matches_root_product() {
        // res(x - 2, x^2 - 1) = (2^2 - 1) = 3
        assert_eq!(p(&[-2, 1]).resultant(&p(&[-1, 0, 1])), rat(3, 1));
        assert_eq!(p(&[-1, 1]).resultant(&p(&[-1, 0, 1])), rat(0, 1));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 2]).to_string(), "2*x^2 - 3*x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }
}
