//! Sparse multivariate polynomials over a field, Gröbner bases, fractions,
//! derivations and elimination.
//!
//! Variables are identified by index; a [`VarSet`] attaches names for
//! printing and parsing. Lower indices are the higher-priority variables in
//! every monomial order.

mod derivation;
mod exp;
mod groebner;
mod monomial;
mod mrat;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{Field, Ring};
use crate::parse::{EvalContext, Expr};
use crate::{Error, Rational};

pub use derivation::Derivation;
pub use exp::{eliminate, nilpotent_exp};
pub use groebner::{buchberger, s_polynomial, GroebnerBasis, DEFAULT_BUDGET};
pub use monomial::{Monomial, MonomialOrder};
pub use mrat::{gcd, MRat};

/// A polynomial: map from monomial to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly<K> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> MPoly<K> {
    pub fn constant(c: K) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: K) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i, 1), K::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<K> {
        self.is_constant().then(|| self.coeff(&Monomial::one()))
    }

    /// Number of variable slots touched (one past the largest used index).
    pub fn width(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// Largest used variable index.
    pub fn max_var(&self) -> Option<usize> {
        self.width().checked_sub(1)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &K)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|t| t.0)
    }

    pub fn leading_coeff(&self, order: MonomialOrder) -> K {
        self.leading_term(order).map_or_else(K::zero, |t| t.1.clone())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect() }
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(n, a)| (n * m, a.clone() * c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> MPoly<L> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Renames variable `i` to `f(i)`; `f` must be injective on used indices.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.remap(&f), c.clone())))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        MPoly::from_terms(self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            (m.with_exp(i, e - 1), c.clone() * K::from_int(e as i64))
        }))
    }

    /// Coefficients with respect to variable `i`, indexed by degree.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); self.degree_in(i) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(i) as usize].add_term(m.with_exp(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(i: usize, cs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(i, k as u32), a.clone());
            }
        }
        out
    }

    /// Substitutes `vals[i]` for each variable `i < vals.len()`.
    pub fn substitute(&self, vals: &[MPoly<K>]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            let mut rest = m.clone();
            for (i, v) in vals.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = &t * &v.pow(e);
                    rest = rest.with_exp(i, 0);
                }
            }
            out = &out + &t.mul_term(&rest, &K::one());
        }
        out
    }

    /// Exact division, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.inv()));
        }
        let order = MonomialOrder::Lex;
        let (lm, lc) = divisor.leading_term(order).map(|(m, c)| (m.clone(), c.inv()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
            let q = m.div(&lm)?;
            let qc = c * lc.clone();
            rem = &rem - &divisor.mul_term(&q, &qc);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Formats with the given variable names.
    pub fn display<'a>(&'a self, vars: &'a VarSet) -> impl fmt::Display + 'a {
        Shown { p: self, name: move |i| vars.name(i) }
    }
}

struct Shown<'a, K, N> {
    p: &'a MPoly<K>,
    name: N,
}

impl<K: Field, N: Fn(usize) -> String> fmt::Display for Shown<'_, K, N> {
    /// Terms in descending degrevlex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.p.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mono = m.fmt_with(&self.name);
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !has_top_level_sum(rest) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let mag = if has_top_level_sum(&mag) { format!("({mag})") } else { mag };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// True when `s` contains `+` or a binary `-` outside parentheses.
pub(crate) fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

impl<K: Field> fmt::Display for MPoly<K> {
    /// Uses placeholder names `v0, v1, ...`; see [`MPoly::display`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Shown { p: self, name: |i| format!("v{i}") }.fmt(f)
    }
}

impl<K: Field> Zero for MPoly<K> {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<K: Field> One for MPoly<K> {
    fn one() -> Self {
        Self::constant(K::one())
    }
}

impl<'a, K: Field> Add<&'a MPoly<K>> for &'a MPoly<K> {
    type Output = MPoly<K>;
    fn add(self, rhs: &MPoly<K>) -> MPoly<K> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, K: Field> Sub<&'a MPoly<K>> for &'a MPoly<K> {
    type Output = MPoly<K>;
    fn sub(self, rhs: &MPoly<K>) -> MPoly<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, K: Field> Mul<&'a MPoly<K>> for &'a MPoly<K> {
    type Output = MPoly<K>;
    fn mul(self, rhs: &MPoly<K>) -> MPoly<K> {
        let mut out = MPoly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m * n, a.clone() * b.clone());
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for MPoly<K> {
            type Output = MPoly<K>;
            fn $m(self, rhs: MPoly<K>) -> MPoly<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Field> Neg for MPoly<K> {
    type Output = MPoly<K>;
    fn neg(self) -> MPoly<K> {
        MPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<K: Field> Ring for MPoly<K> {}

/// Ordered, distinct variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new(names: Vec<String>) -> Result<Self, Error> {
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::BadSpec(format!("duplicate variable {a}")));
            }
        }
        Ok(VarSet { names })
    }

    /// The coordinates `Z_i_j`, `1 <= i < j <= n`, row by row.
    pub fn coordinates(n: usize) -> Self {
        let names = upper_positions(n).map(|(i, j)| format!("Z_{}_{}", i + 1, j + 1)).collect();
        VarSet { names }
    }

    /// Parameters `x1, ..., xm`.
    pub fn parameters(m: usize) -> Self {
        VarSet { names: (1..=m).map(|k| format!("x{k}")).collect() }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &VarSet) -> Result<Self, Error> {
        Self::new(self.names.iter().chain(&other.names).cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> String {
        self.names.get(i).cloned().unwrap_or_else(|| format!("v{i}"))
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse<K: Field>(&self, src: &str) -> Result<MPoly<K>, Error> {
        MPolyContext::<K>::new(self).parse(src)
    }
}

/// Strictly upper positions `(i, j)` (0-based) in row-major order; the
/// index of `Z_{i+1,j+1}` in [`VarSet::coordinates`] is the position in this list.
pub fn upper_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Index of `Z_{i+1,j+1}` among the coordinates of `U(n)`.
pub fn coordinate_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Parses polynomials over `K` in the variables of a [`VarSet`]. Division
/// is allowed only by constants.
pub struct MPolyContext<'a, K> {
    vars: &'a VarSet,
    _k: std::marker::PhantomData<K>,
}

impl<'a, K: Field> MPolyContext<'a, K> {
    pub fn new(vars: &'a VarSet) -> Self {
        MPolyContext { vars, _k: std::marker::PhantomData }
    }
}

impl<K: Field> EvalContext for MPolyContext<'_, K> {
    type Value = MPoly<K>;

    fn constant(&self, q: Rational) -> MPoly<K> {
        MPoly::constant(K::from_rational(q))
    }

    fn variable(&self, name: &str) -> Result<MPoly<K>, Error> {
        if let Some(i) = self.vars.index(name) {
            return Ok(MPoly::var(i));
        }
        K::base_variable(name)
            .map(MPoly::constant)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown variable {name:?}") })
    }

    fn add(&self, a: MPoly<K>, b: MPoly<K>) -> Result<MPoly<K>, Error> {
        Ok(a + b)
    }

    fn sub(&self, a: MPoly<K>, b: MPoly<K>) -> Result<MPoly<K>, Error> {
        Ok(a - b)
    }

    fn mul(&self, a: MPoly<K>, b: MPoly<K>) -> Result<MPoly<K>, Error> {
        Ok(a * b)
    }

    fn div(&self, a: MPoly<K>, b: MPoly<K>) -> Result<MPoly<K>, Error> {
        match b.constant_value() {
            Some(c) if c.is_zero() => Err(Error::DivisionByZero),
            Some(c) => Ok(a.scale(&c.inv())),
            None => Err(Error::Parse { pos: 0, msg: "division by a non-constant polynomial".into() }),
        }
    }

    fn pow(&self, base: MPoly<K>, _e: &Expr, e: &Rational) -> Result<MPoly<K>, Error> {
        if !e.is_integer() || e < &Rational::zero() {
            return Err(Error::Parse { pos: 0, msg: format!("exponent {e} must be a nonnegative integer") });
        }
        let n: u32 = e.to_integer().try_into().map_err(|_| Error::Parse { pos: 0, msg: "exponent too large".into() })?;
        Ok(base.pow(n))
    }
}
