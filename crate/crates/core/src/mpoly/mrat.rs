use std::any::Any;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{MPoly, Monomial, MonomialOrder};
use crate::field::{Field, Ring};
use crate::ratfield::{Poly, RatFunc, UPoly};
use crate::{Error, Rational};

/// Greatest common divisor in `K[v0, v1, ...]`, normalized to leading
/// coefficient 1 in lex order (zero only when both inputs are zero).
///
/// Recursive: split off the content in the largest variable and run a
/// primitive pseudo-remainder sequence on the primitive parts.
///
/// Over `Q(x)` the coefficients are cleared first and `x` becomes one more
/// variable: rational-function coefficients grow far too fast inside a
/// remainder sequence.
pub fn gcd<K: Field>(a: &MPoly<K>, b: &MPoly<K>) -> MPoly<K> {
    let any = |p: &MPoly<K>| (p as &dyn Any).downcast_ref::<MPoly<RatFunc>>().cloned();
    if let (Some(a), Some(b)) = (any(a), any(b)) {
        let g = gcd_over_qx(&a, &b);
        return (&g as &dyn Any).downcast_ref::<MPoly<K>>().expect("K is RatFunc").clone();
    }
    gcd_rec(a, b).monic(MonomialOrder::Lex)
}

/// `p` times the lcm of its coefficient denominators, with `x` as variable 0.
fn clear_x(p: &MPoly<RatFunc>) -> MPoly<Rational> {
    let l = p.terms().fold(UPoly::one(), |l, (_, c)| {
        let g = l.gcd(c.den());
        &l * &c.den().div_exact(&g).expect("gcd divides")
    });
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        let num = c.num() * &l.div_exact(c.den()).expect("den divides lcm");
        for (k, a) in num.coeffs().iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![k as u32];
                e.extend_from_slice(m.exps());
                out.add_term(Monomial::new(e), a.clone());
            }
        }
    }
    out
}

fn gcd_over_qx(a: &MPoly<RatFunc>, b: &MPoly<RatFunc>) -> MPoly<RatFunc> {
    let (ca, cb) = (clear_x(a), clear_x(b));
    let g = gcd_rec(&ca, &cb);
    let mut out = MPoly::zero();
    for (m, c) in g.terms() {
        let e = m.exps();
        let rest = Monomial::new(e.iter().skip(1).copied().collect());
        let k = e.first().copied().unwrap_or(0) as usize;
        out.add_term(rest, RatFunc::from_poly(UPoly::monomial(c.clone(), k)));
    }
    out.monic(MonomialOrder::Lex)
}

fn monomial_content<K: Field>(p: &MPoly<K>) -> Monomial {
    let mut it = p.terms.keys();
    let first = it.next().cloned().unwrap_or_else(Monomial::one);
    it.fold(first, |acc, m| acc.gcd(m))
}

fn gcd_rec<K: Field>(a: &MPoly<K>, b: &MPoly<K>) -> MPoly<K> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a.num_terms() == 1 {
        let m = a.terms.keys().next().expect("one term").gcd(&monomial_content(b));
        return MPoly::term(m, K::one());
    }
    if b.num_terms() == 1 {
        return gcd_rec(b, a);
    }
    if a == b {
        return a.clone();
    }
    if coprime_by_evaluation(a, b) {
        return MPoly::one();
    }
    if let Some(g) = divides_either(a, b) {
        return g;
    }
    let v = main_variable(a, b);
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    if q.degree_in(v) == 0 {
        return c;
    }
    // subresultant remainder sequence: exact divisions, no contents inside the loop
    let (mut g, mut h) = (MPoly::one(), MPoly::one());
    loop {
        let delta = p.degree_in(v) - q.degree_in(v);
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return c;
        }
        let div = &g * &h.pow(delta);
        p = q;
        q = r.div_exact(&div).expect("subresultant division is exact");
        g = p.coeffs_in(v).pop().expect("nonzero");
        h = if delta == 0 { h } else { g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact") };
    }
    let q = q.div_exact(&content_in(&q, v)).expect("content divides").monic(MonomialOrder::Lex);
    &c * &q
}

/// A variable missing from one side goes first (the gcd is then a content);
/// otherwise the one of least degree keeps the remainder sequence short.
fn main_variable<K: Field>(a: &MPoly<K>, b: &MPoly<K>) -> usize {
    let width = a.width().max(b.width());
    let key = |i: usize| {
        let (da, db) = (a.degree_in(i), b.degree_in(i));
        if da == 0 || db == 0 {
            (0, 0)
        } else {
            (1, da.max(db))
        }
    };
    (0..width).filter(|&i| a.uses_var(i) || b.uses_var(i)).min_by_key(|&i| key(i)).expect("non-constant")
}

/// Image of `p` in `K[v]` with every other variable `i` set to `at[i]`.
fn univariate_image<K: Field>(p: &MPoly<K>, v: usize, at: &[K]) -> Poly<K> {
    let mut coeffs = vec![K::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exps().iter().enumerate() {
            if i != v {
                for _ in 0..e {
                    t = t * at[i].clone();
                }
            }
        }
        let k = m.exp(v) as usize;
        coeffs[k] = coeffs[k].clone() + t;
    }
    Poly::new(coeffs)
}

/// A cheap sufficient test for `gcd(a, b) = 1`. Specializing all variables
/// but `v` keeps the `v`-degree of the gcd from going down as long as both
/// leading coefficients in `v` survive; so a constant image gcd for every
/// shared variable proves the gcd constant.
fn coprime_by_evaluation<K: Field>(a: &MPoly<K>, b: &MPoly<K>) -> bool {
    let width = a.width().max(b.width());
    let shared: Vec<usize> = (0..width).filter(|&i| a.uses_var(i) && b.uses_var(i)).collect();
    if shared.is_empty() {
        return true;
    }
    const POINTS: [[i64; 2]; 3] = [[2, 3], [-3, 5], [7, -2]];
    shared.iter().all(|&v| {
        POINTS.iter().any(|pt| {
            let at: Vec<K> = (0..width).map(|i| K::from_int(pt[0] + pt[1] * i as i64 + (i * i) as i64)).collect();
            let (ia, ib) = (univariate_image(a, v, &at), univariate_image(b, v, &at));
            ia.degree() == Some(a.degree_in(v) as usize)
                && ib.degree() == Some(b.degree_in(v) as usize)
                && ia.gcd(&ib).degree() == Some(0)
        })
    })
}

/// The smaller input when it divides the other one.
fn divides_either<K: Field>(a: &MPoly<K>, b: &MPoly<K>) -> Option<MPoly<K>> {
    let (small, big) = if a.total_degree() <= b.total_degree() { (a, b) } else { (b, a) };
    big.div_exact(small).map(|_| small.clone())
}

/// Gcd of the coefficients of `p` viewed in `K[others][v]`.
fn content_in<K: Field>(p: &MPoly<K>, v: usize) -> MPoly<K> {
    let mut acc = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            return MPoly::one();
        }
    }
    acc.monic(MonomialOrder::Lex)
}

/// `lc(q)^(deg p - deg q + 1) * p mod q` in `K[others][v]`.
fn pseudo_rem<K: Field>(p: &MPoly<K>, q: &MPoly<K>, v: usize) -> MPoly<K> {
    let dq = q.degree_in(v);
    let lq = q.coeffs_in(v).pop().expect("nonzero");
    let mut steps = p.degree_in(v) + 1 - dq;
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v).pop().expect("nonzero");
        let shift = MPoly::term(Monomial::var(v, dr - dq), K::one());
        r = &(&lq * &r) - &(&(&lr * &shift) * q);
        steps -= 1;
    }
    &r * &lq.pow(steps)
}

/// A fraction of polynomials, kept in lowest terms with a denominator of
/// lex-leading coefficient 1. Equal fractions are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MRat<K> {
    num: MPoly<K>,
    den: MPoly<K>,
}

impl<K: Field> MRat<K> {
    pub fn new(num: MPoly<K>, den: MPoly<K>) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly<K>, den: MPoly<K>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return MRat { num: num.scale(&c.inv()), den: MPoly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff(MonomialOrder::Lex);
        if lc.is_one() {
            MRat { num, den }
        } else {
            let inv = lc.inv();
            MRat { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: MPoly<K>) -> Self {
        MRat { num: p, den: MPoly::one() }
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MPoly::var(i))
    }

    pub fn num(&self) -> &MPoly<K> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<K> {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly<K>, MPoly<K>) {
        (self.num, self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly<K>> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<K> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.num.uses_var(i) || self.den.uses_var(i)
    }

    pub fn recip(&self) -> Result<Self, Error> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).map_err(|_| Error::NotSupported("exponent too large".into()))?;
        Ok(MRat { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MRat { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> MRat<L> {
        MRat::normalized(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Self {
        MRat::normalized(self.num.remap(&f), self.den.remap(&f))
    }
}

impl<K: Field> Zero for MRat<K> {
    fn zero() -> Self {
        MRat { num: MPoly::zero(), den: MPoly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<K: Field> One for MRat<K> {
    fn one() -> Self {
        Self::from_poly(MPoly::one())
    }
}

impl<'a, K: Field> Add<&'a MRat<K>> for &'a MRat<K> {
    type Output = MRat<K>;
    fn add(self, rhs: &MRat<K>) -> MRat<K> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return MRat::from_poly(&self.num + &rhs.num);
            }
            return MRat::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        MRat::normalized(&(&self.num * &b) + &(&rhs.num * &a), &a * &rhs.den)
    }
}

impl<'a, K: Field> Sub<&'a MRat<K>> for &'a MRat<K> {
    type Output = MRat<K>;
    fn sub(self, rhs: &MRat<K>) -> MRat<K> {
        self + &(-rhs.clone())
    }
}

impl<'a, K: Field> Mul<&'a MRat<K>> for &'a MRat<K> {
    type Output = MRat<K>;
    fn mul(self, rhs: &MRat<K>) -> MRat<K> {
        if self.is_zero() || rhs.is_zero() {
            return MRat::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return MRat::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let (num, den) = (&n1 * &n2, &d1 * &d2);
        if let Some(c) = den.constant_value() {
            return MRat { num: num.scale(&c.inv()), den: MPoly::one() };
        }
        let lc = den.leading_coeff(MonomialOrder::Lex);
        let inv = lc.inv();
        MRat { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl<'a, K: Field> Div<&'a MRat<K>> for &'a MRat<K> {
    type Output = MRat<K>;
    /// Panics on division by zero; see [`MRat::recip`].
    fn div(self, rhs: &MRat<K>) -> MRat<K> {
        self * &rhs.recip().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for MRat<K> {
            type Output = MRat<K>;
            fn $m(self, rhs: MRat<K>) -> MRat<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<K: Field> Neg for MRat<K> {
    type Output = MRat<K>;
    fn neg(self) -> MRat<K> {
        MRat { num: -self.num, den: self.den }
    }
}

impl<K: Field> Ring for MRat<K> {}

impl<K: Field> Field for MRat<K> {
    fn from_rational(q: Rational) -> Self {
        Self::constant(K::from_rational(q))
    }

    fn inv(&self) -> Self {
        self.recip().expect("inverse of zero")
    }

    fn to_rational(&self) -> Option<Rational> {
        self.constant_value().and_then(|c| c.to_rational())
    }
}

impl<K: Field> fmt::Display for MRat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
