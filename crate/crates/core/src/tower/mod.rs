//! Differential towers `Q(x)(θ1, ..., θk)` over the base field.
//!
//! Each generator is a logarithm, an exponential, the radical `x^(1/n)`, or
//! a formal integral, and carries its derivative as a fraction in the
//! earlier generators. Generators are otherwise independent indeterminates;
//! the only relation imposed is `θ^n = x` for a radical.
//!
//! A [`Tower`] is immutable. Extending it yields a new tower that shares the
//! old generators, and expressions of the old tower remain valid in the new
//! one.

mod parse;
mod solutions;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::field::{DifferentialField, Field, Ring};
use crate::matrix::Matrix;
use crate::mpoly::{Derivation, MPoly, MRat, Monomial, VarSet};
use crate::ratfield::RatFunc;
use crate::{Error, Rational};

pub use parse::{parse_generator, TowerContext};
pub use solutions::{
    annihilator_of_iterated_integral, apply_operator, fundamental_t, nested_solutions,
};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    /// `θ' = u'/u`
    Log(TowerExpr),
    /// `θ' = u' θ`; negative powers of `θ` are allowed.
    Exp(TowerExpr),
    /// `θ = x^(1/n)`, reduced by `θ^n = x`.
    Radical(u32),
    /// `θ' = g`
    FormalIntegral(TowerExpr),
}

#[derive(Debug)]
pub struct Generator {
    name: String,
    kind: GeneratorKind,
    derivative: MRat<RatFunc>,
}

impl Generator {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    /// `θ'` as a fraction in the earlier generators.
    pub fn derivative(&self) -> &MRat<RatFunc> {
        &self.derivative
    }

    /// The definition in the text grammar: `log(u)`, `exp(u)`, `x^(1/n)`, `int(g)`.
    pub fn definition(&self) -> String {
        match &self.kind {
            GeneratorKind::Log(u) => format!("log({u})"),
            GeneratorKind::Exp(u) => format!("exp({u})"),
            GeneratorKind::Radical(n) => format!("x^(1/{n})"),
            GeneratorKind::FormalIntegral(g) => format!("int({g})"),
        }
    }
}

#[derive(Debug, Default)]
pub struct Tower {
    gens: Vec<Arc<Generator>>,
    vars: VarSet,
    derivation: Derivation<RatFunc>,
    radical: Option<(usize, u32)>,
}

impl Tower {
    /// The base field alone.
    pub fn base() -> Arc<Tower> {
        Arc::new(Tower::default())
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Arc<Generator>] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.index(name)
    }

    pub fn derivation(&self) -> &Derivation<RatFunc> {
        &self.derivation
    }

    /// The radical generator and its root, if any.
    pub fn radical(&self) -> Option<(usize, u32)> {
        self.radical
    }

    /// Adds a generator. Arguments of `kind` must live in this tower (or a
    /// prefix of it).
    pub fn extend(self: &Arc<Self>, name: &str, kind: GeneratorKind) -> Result<Arc<Tower>, Error> {
        let valid_ident = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid_ident || name == "x" || name == "D" {
            return Err(Error::BadTower(format!("invalid generator name {name:?}")));
        }
        if self.index(name).is_some() {
            return Err(Error::BadTower(format!("duplicate generator name {name:?}")));
        }
        let lift = |e: &TowerExpr| -> Result<TowerExpr, Error> { e.lift_to(self) };
        let i = self.len();
        let mut radical = self.radical;
        let (kind, derivative) = match kind {
            GeneratorKind::Log(u) => {
                let u = lift(&u)?;
                if u.is_constant() {
                    return Err(Error::BadTower(format!("log of the constant {u}")));
                }
                let d = (u.derive() / u.clone()).value;
                (GeneratorKind::Log(u), d)
            }
            GeneratorKind::Exp(u) => {
                let u = lift(&u)?;
                if u.is_constant() {
                    return Err(Error::BadTower(format!("exp of the constant {u}")));
                }
                let d = &u.derive().value * &MRat::var(i);
                (GeneratorKind::Exp(u), d)
            }
            GeneratorKind::Radical(n) => {
                if n < 2 {
                    return Err(Error::BadTower(format!("radical x^(1/{n}) needs n >= 2")));
                }
                if radical.is_some() {
                    return Err(Error::BadTower("at most one radical generator per tower".into()));
                }
                radical = Some((i, n));
                let coef = RatFunc::x().inv() * RatFunc::constant(Rational::from_integer(n.into()).recip());
                (GeneratorKind::Radical(n), MRat::var(i).scale(&coef))
            }
            GeneratorKind::FormalIntegral(g) => {
                let g = lift(&g)?;
                let d = g.value.clone();
                (GeneratorKind::FormalIntegral(g), d)
            }
        };
        let mut names = self.vars.names().to_vec();
        names.push(name.to_string());
        let mut derivation = self.derivation.clone();
        derivation.push(derivative.clone());
        let mut gens = self.gens.clone();
        gens.push(Arc::new(Generator { name: name.to_string(), kind, derivative }));
        Ok(Arc::new(Tower { gens, vars: VarSet::new(names)?, derivation, radical }))
    }

    /// The generator `name` as an expression.
    pub fn gen(self: &Arc<Self>, name: &str) -> Result<TowerExpr, Error> {
        let i = self.index(name).ok_or_else(|| Error::BadTower(format!("no generator {name:?}")))?;
        Ok(TowerExpr { tower: Some(self.clone()), value: MRat::var(i) })
    }

    pub fn gen_at(self: &Arc<Self>, i: usize) -> TowerExpr {
        assert!(i < self.len());
        TowerExpr { tower: Some(self.clone()), value: MRat::var(i) }
    }

    /// True when every generator of `self` is (pointer-)shared by `other` at the same position.
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.len() <= other.len() && self.gens.iter().zip(&other.gens).all(|(a, b)| Arc::ptr_eq(a, b))
    }

    /// Parses an expression over this tower. The result belongs to this
    /// tower even when no generator occurs in it.
    pub fn parse(self: &Arc<Self>, src: &str) -> Result<TowerExpr, Error> {
        use crate::parse::EvalContext;
        TowerContext::new(self).parse(src)?.lift_to(self)
    }
}

/// An element of a tower. Elements with no tower attached lie in the base
/// field and combine with anything.
#[derive(Clone, Debug)]
pub struct TowerExpr {
    tower: Option<Arc<Tower>>,
    value: MRat<RatFunc>,
}

fn join(a: &Option<Arc<Tower>>, b: &Option<Arc<Tower>>) -> Result<Option<Arc<Tower>>, Error> {
    match (a, b) {
        (None, t) | (t, None) => Ok(t.clone()),
        (Some(x), Some(y)) => {
            if Arc::ptr_eq(x, y) || y.is_prefix_of(x) {
                Ok(a.clone())
            } else if x.is_prefix_of(y) {
                Ok(b.clone())
            } else {
                Err(Error::TowerMismatch)
            }
        }
    }
}

impl TowerExpr {
    pub fn base(f: RatFunc) -> Self {
        TowerExpr { tower: None, value: MRat::constant(f) }
    }

    pub fn constant(q: Rational) -> Self {
        Self::base(RatFunc::constant(q))
    }

    /// Builds from a fraction in the generators of `tower`, reducing it.
    pub fn from_value(tower: &Arc<Tower>, value: MRat<RatFunc>) -> Self {
        let t = (!tower.is_empty()).then(|| tower.clone());
        TowerExpr { tower: t.clone(), value: canonical(&t, value) }
    }

    pub fn value(&self) -> &MRat<RatFunc> {
        &self.value
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    /// The element as a base-field element, if no generator occurs.
    pub fn as_base(&self) -> Option<RatFunc> {
        self.value.constant_value()
    }

    pub fn is_constant(&self) -> bool {
        self.as_base().is_some_and(|f| f.to_rational().is_some())
    }

    pub fn uses(&self, i: usize) -> bool {
        self.value.uses_var(i)
    }

    /// Re-homes the element in `target`, which must extend its tower.
    pub fn lift_to(&self, target: &Arc<Tower>) -> Result<TowerExpr, Error> {
        match &self.tower {
            Some(t) if !t.is_prefix_of(target) => Err(Error::TowerMismatch),
            _ => Ok(TowerExpr {
                tower: (!target.is_empty()).then(|| target.clone()),
                value: self.value.clone(),
            }),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, Error> {
        let t = join(&self.tower, &rhs.tower)?;
        Ok(TowerExpr { value: &self.value + &rhs.value, tower: t })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, Error> {
        let t = join(&self.tower, &rhs.tower)?;
        Ok(TowerExpr { value: &self.value - &rhs.value, tower: t })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, Error> {
        let t = join(&self.tower, &rhs.tower)?;
        let v = &self.value * &rhs.value;
        Ok(TowerExpr { value: canonical(&t, v), tower: t })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, Error> {
        let t = join(&self.tower, &rhs.tower)?;
        let v = &self.value * &rhs.value.recip()?;
        Ok(TowerExpr { value: canonical(&t, v), tower: t })
    }

    pub fn recip(&self) -> Result<Self, Error> {
        let v = self.value.recip()?;
        Ok(TowerExpr { value: canonical(&self.tower, v), tower: self.tower.clone() })
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let v = self.value.pow(e)?;
        Ok(TowerExpr { value: canonical(&self.tower, v), tower: self.tower.clone() })
    }

    /// Coefficients of the element as a (Laurent, for exponentials)
    /// polynomial in generator `i`, each free of that generator.
    pub fn laurent_normal(&self, i: usize) -> Result<BTreeMap<i64, TowerExpr>, Error> {
        let t = self.tower.as_ref().filter(|t| i < t.len()).ok_or_else(|| {
            Error::BadTower(format!("generator index {i} is not in the tower"))
        })?;
        let name = t.generator(i).name.clone();
        let not_poly = || Error::NotPolynomialIn(name.clone());
        let (num, den) = (self.value.num(), self.value.den());
        let shift = if den.uses_var(i) {
            if !matches!(t.generator(i).kind, GeneratorKind::Exp(_)) {
                return Err(not_poly());
            }
            let k = den.degree_in(i);
            if den.terms().any(|(m, _)| m.exp(i) != k) {
                return Err(not_poly());
            }
            k as i64
        } else {
            0
        };
        let d0 = MPoly::from_terms(den.terms().map(|(m, c)| (m.with_exp(i, 0), c.clone())));
        let mut out = BTreeMap::new();
        for (k, c) in num.coeffs_in(i).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = MRat::new(c, d0.clone()).expect("nonzero denominator");
            out.insert(k as i64 - shift, TowerExpr::from_value(t, v));
        }
        Ok(out)
    }

    /// Inverse of [`TowerExpr::laurent_normal`].
    pub fn from_laurent(tower: &Arc<Tower>, i: usize, coeffs: &BTreeMap<i64, TowerExpr>) -> Result<Self, Error> {
        let theta = tower.gen_at(i);
        let mut acc = TowerExpr::zero();
        for (k, c) in coeffs {
            acc = acc.try_add(&c.try_mul(&theta.pow(*k)?)?)?;
        }
        Ok(acc)
    }
}

/// Reduces by `θ^n = x` and moves the radical out of the denominator.
fn canonical(tower: &Option<Arc<Tower>>, v: MRat<RatFunc>) -> MRat<RatFunc> {
    let Some((r, n)) = tower.as_ref().and_then(|t| t.radical) else {
        return v;
    };
    if !v.uses_var(r) {
        return v;
    }
    let (num, den) = v.into_parts();
    let (num, den) = (reduce_radical(&num, r, n), reduce_radical(&den, r, n));
    if !den.uses_var(r) {
        return MRat::new(num, den).expect("nonzero denominator");
    }
    // d * (sum y_i θ^i) = 1 is M y = e_0 with M the multiplication matrix of d;
    // y_i = C_{0,i} / det M by Cramer, all fraction-free.
    let cols = den.coeffs_in(r);
    let n_us = n as usize;
    let entry = |k: usize| cols.get(k).cloned().unwrap_or_else(MPoly::zero);
    let x = MPoly::constant(RatFunc::x());
    let m = Matrix::from_fn(n_us, n_us, |i, j| {
        // coefficient of θ^i in d * θ^j
        if i >= j {
            entry(i - j)
        } else {
            &entry(i + n_us - j) * &x
        }
    });
    let det = bareiss_det(m.clone());
    assert!(!det.is_zero(), "θ^n - x is irreducible, so nonzero elements are invertible");
    let mut adj_col = MPoly::zero();
    for i in 0..n_us {
        let minor = Matrix::from_fn(n_us - 1, n_us - 1, |a, b| m[(a + 1, if b < i { b } else { b + 1 })].clone());
        let c = if n_us == 1 { MPoly::one() } else { bareiss_det(minor) };
        let c = if i % 2 == 1 { -c } else { c };
        adj_col = &adj_col + &c.mul_term(&Monomial::var(r, i as u32), &RatFunc::one());
    }
    let d_inv = MRat::new(adj_col, det).expect("nonzero determinant");
    let (p, q) = (&MRat::from_poly(num) * &d_inv).into_parts();
    MRat::new(reduce_radical(&p, r, n), q).expect("nonzero denominator")
}

/// Fraction-free determinant (Bareiss); every division is exact.
fn bareiss_det(mut a: Matrix<MPoly<RatFunc>>) -> MPoly<RatFunc> {
    let n = a.rows();
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return MPoly::zero();
        };
        if p != k {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(k, j)].clone();
                a[(k, j)] = t;
            }
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                a[(i, j)] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[(k, k)].clone();
    }
    if sign {
        -prev
    } else {
        prev
    }
}

fn reduce_radical(p: &MPoly<RatFunc>, r: usize, n: u32) -> MPoly<RatFunc> {
    if p.degree_in(r) < n {
        return p.clone();
    }
    MPoly::from_terms(p.terms().map(|(m, c)| {
        let e = m.exp(r);
        let xq = RatFunc::x().pow((e / n) as i64).expect("nonnegative");
        (m.with_exp(r, e % n), c.clone() * xq)
    }))
}

impl PartialEq for TowerExpr {
    fn eq(&self, other: &Self) -> bool {
        join(&self.tower, &other.tower).is_ok() && self.value == other.value
    }
}

impl fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let empty = VarSet::default();
        let vars = self.tower.as_ref().map_or(&empty, |t| &t.vars);
        let (num, den) = (self.value.num(), self.value.den());
        if den.is_one() {
            return write!(f, "{}", num.display(vars));
        }
        let ns = num.display(vars).to_string();
        let ds = den.display(vars).to_string();
        let single = num.num_terms() == 1 && !ns.contains(['/', '+']) && !ns.starts_with('-');
        if single {
            write!(f, "{ns}/({ds})")
        } else {
            write!(f, "({ns})/({ds})")
        }
    }
}

impl Zero for TowerExpr {
    fn zero() -> Self {
        TowerExpr { tower: None, value: MRat::zero() }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for TowerExpr {
    fn one() -> Self {
        TowerExpr { tower: None, value: MRat::one() }
    }
}

macro_rules! panicking_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr for TowerExpr {
            type Output = TowerExpr;
            /// Panics when the operands live in unrelated towers.
            fn $m(self, rhs: TowerExpr) -> TowerExpr {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $tr<&'a TowerExpr> for &'a TowerExpr {
            type Output = TowerExpr;
            fn $m(self, rhs: &TowerExpr) -> TowerExpr {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}
panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);
panicking_op!(Div, div, try_div);

impl Neg for TowerExpr {
    type Output = TowerExpr;
    fn neg(self) -> TowerExpr {
        TowerExpr { tower: self.tower, value: -self.value }
    }
}

impl Ring for TowerExpr {}

impl Field for TowerExpr {
    fn from_rational(q: Rational) -> Self {
        Self::constant(q)
    }

    fn inv(&self) -> Self {
        self.recip().expect("inverse of zero")
    }

    fn to_rational(&self) -> Option<Rational> {
        self.as_base().and_then(|f| f.to_rational())
    }

    fn base_variable(name: &str) -> Option<Self> {
        RatFunc::base_variable(name).map(Self::base)
    }
}

impl DifferentialField for TowerExpr {
    fn derive(&self) -> Self {
        let Some(t) = &self.tower else {
            return TowerExpr::base(self.as_base().expect("base element").derive());
        };
        let part = |p: &MPoly<RatFunc>| TowerExpr {
            value: canonical(&self.tower, t.derivation.derive_mpoly(p)),
            tower: self.tower.clone(),
        };
        if self.value.is_polynomial() {
            return part(self.value.num());
        }
        // (n/d)' = (n' d - n d') / d^2, with the radical reduced at every step
        let whole = |p: &MPoly<RatFunc>| TowerExpr { value: MRat::from_poly(p.clone()), tower: self.tower.clone() };
        let (n, d) = (whole(self.value.num()), whole(self.value.den()));
        (part(self.value.num()) * d.clone() - n * part(self.value.den())) / (d.clone() * d)
    }
}

impl From<RatFunc> for TowerExpr {
    fn from(f: RatFunc) -> Self {
        Self::base(f)
    }
}

/// The derivative through the tower's derivation.
pub fn derive_expr(e: &TowerExpr) -> TowerExpr {
    e.derive()
}
