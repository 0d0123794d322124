//! Integrability over `Q(x)` and over the simple towers `Q(x)(e^x)`,
//! `Q(x)(log x)` and `Q(x^(1/n))`.
//!
//! An element is n-integrable in a field when some `h` in that field has
//! `h^(n) = g`, and ∞-integrable when it is n-integrable for every `n`.
//! The classifiers for the three towers decide ∞-integrability; a requested
//! depth only selects which antiderivative is returned as the witness.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::field::{binomial, DifferentialField};
use crate::ratfield::{antiderivative_in_field, hermite_reduce, rational_log_part, RatFunc, UPoly};
use crate::tower::{GeneratorKind, Tower, TowerExpr};
use crate::{Error, Rational};

/// Why an element is not integrable in the field it was given in.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// The `step`-th antiderivative would need a logarithm: Hermite
    /// reduction leaves this nonzero proper remainder.
    SimplePole { step: usize, remainder: RatFunc },
    /// The proper part of a rational function, nonzero.
    ProperPart(RatFunc),
    /// The element is not a (Laurent) polynomial in the generator.
    NotLaurent(String),
    /// The coefficient of `θ^power` lies outside the allowed ring.
    Coefficient { power: i64, coefficient: RatFunc, ring: &'static str },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::SimplePole { step, remainder } => {
                write!(f, "antiderivative {step} leaves the simple-pole remainder {remainder}")
            }
            Obstruction::ProperPart(r) => write!(f, "nonzero proper part {r}"),
            Obstruction::NotLaurent(why) => write!(f, "{why}"),
            Obstruction::Coefficient { power, coefficient, ring } => {
                write!(f, "coefficient {coefficient} of power {power} is not in {ring}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegrabilityVerdict {
    /// `witness^(depth) = g`.
    Integrable { witness: TowerExpr, depth: usize },
    NotIntegrable(Obstruction),
    NotSupported(String),
}

impl IntegrabilityVerdict {
    pub fn is_integrable(&self) -> bool {
        matches!(self, IntegrabilityVerdict::Integrable { .. })
    }

    pub fn witness(&self) -> Option<&TowerExpr> {
        match self {
            IntegrabilityVerdict::Integrable { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// `g = f^(n) + sum_i sum_{j=1}^{n} binom(n, j) f_i^(n-j) (u_i'/u_i)^(j-1)`
/// with polynomials `f_i` of degree below `n`.
///
/// This is the n-th derivative of `f + sum f_i log(u_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleForm {
    n: usize,
    f: RatFunc,
    terms: Vec<(UPoly, RatFunc)>,
}

impl LiouvilleForm {
    pub fn new(n: usize, f: RatFunc, terms: Vec<(UPoly, RatFunc)>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::BadSpec("n must be at least 1".into()));
        }
        for (k, (fi, ui)) in terms.iter().enumerate() {
            if ui.is_zero() {
                return Err(Error::ZeroEntry(k + 1));
            }
            if fi.degree().is_some_and(|d| d >= n) {
                return Err(Error::BadSpec(format!("coefficient {fi} has degree >= {n}")));
            }
        }
        Ok(LiouvilleForm { n, f, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &RatFunc {
        &self.f
    }

    pub fn terms(&self) -> &[(UPoly, RatFunc)] {
        &self.terms
    }

    /// The right-hand side of the identity.
    pub fn evaluate(&self) -> RatFunc {
        let n = self.n;
        let mut acc = self.f.derive_n(n);
        for (fi, ui) in &self.terms {
            let fi = RatFunc::from_poly(fi.clone());
            let dlog = ui.derive() / ui.clone();
            for j in 1..=n {
                let c = RatFunc::constant(binomial(n, j));
                acc = acc + c * fi.derive_n(n - j) * dlog.derive_n(j - 1);
            }
        }
        acc
    }
}

pub fn verify_liouville_form(g: &RatFunc, form: &LiouvilleForm) -> bool {
    form.evaluate() == *g
}

/// `g = v' + sum c_i u_i'/u_i`.
pub fn liouville_classic_check(g: &RatFunc, v: &RatFunc, cu: &[(Rational, RatFunc)]) -> bool {
    if cu.iter().any(|(_, u)| u.is_zero()) {
        return false;
    }
    let rhs = cu.iter().fold(v.derive(), |acc, (c, u)| acc + RatFunc::constant(c.clone()) * u.derive() / u.clone());
    rhs == *g
}

/// `g = c + f^(n) + sum c_i (u_i'/u_i)^(n-1)` inside a tower.
pub fn verify_constant_form(g: &TowerExpr, c: &Rational, f: &TowerExpr, cu: &[(Rational, TowerExpr)], n: usize) -> bool {
    let mut acc = TowerExpr::constant(c.clone()) + f.derive_n(n);
    for (ci, ui) in cu {
        let Ok(dlog) = ui.derive().try_div(ui) else {
            return false;
        };
        acc = acc + TowerExpr::constant(ci.clone()) * dlog.derive_n(n.saturating_sub(1));
    }
    acc == *g
}

/// n successive antiderivatives inside `Q(x)`.
pub fn n_integrable_in_cx(g: &RatFunc, n: usize) -> IntegrabilityVerdict {
    let mut h = g.clone();
    for step in 1..=n {
        match antiderivative_in_field(&h) {
            Ok(next) => h = next,
            Err(ob) => return IntegrabilityVerdict::NotIntegrable(Obstruction::SimplePole { step, remainder: ob.remainder }),
        }
    }
    IntegrabilityVerdict::Integrable { witness: TowerExpr::base(h), depth: n }
}

/// ∞-integrable in `Q(x)` exactly for polynomials; the witness is the first
/// antiderivative.
pub fn infinity_integrable_in_cx(g: &RatFunc) -> IntegrabilityVerdict {
    let (poly, proper) = g.split_polynomial();
    if !proper.is_zero() {
        return IntegrabilityVerdict::NotIntegrable(Obstruction::ProperPart(proper));
    }
    IntegrabilityVerdict::Integrable { witness: TowerExpr::base(RatFunc::from_poly(poly.integral())), depth: 1 }
}

/// An elementary n-th antiderivative `η = f0 + sum P_j log(v_j)`.
#[derive(Clone, Debug)]
pub struct ElementaryWitness {
    pub tower: Arc<Tower>,
    pub eta: TowerExpr,
    /// The same data as a [`LiouvilleForm`] for `g`.
    pub form: LiouvilleForm,
}

/// Integrates `n` times, keeping the shape `R + sum P_j log(v_j)`:
/// `int P log v = Q log v - int Q v'/v` with `Q' = P`, and the rational
/// integrand goes through Hermite reduction and the rational-residue
/// logarithmic part.
///
/// The witness is normalized by dropping the part of degree below `n` of the
/// polynomial part of `f0`, which the n-th derivative does not see.
pub fn elementary_n_witness(g: &RatFunc, n: usize) -> Result<ElementaryWitness, Error> {
    if n == 0 {
        return Err(Error::BadSpec("depth must be at least 1".into()));
    }
    let mut rational = g.clone();
    // argument (monic squarefree) -> coefficient polynomial
    let mut logs: BTreeMap<Vec<Rational>, (UPoly, UPoly)> = BTreeMap::new();
    for _ in 0..n {
        let mut integrand = rational.clone();
        for (arg, p) in logs.values_mut() {
            let q = p.integral();
            let a = RatFunc::from_poly(arg.clone());
            integrand = integrand - RatFunc::from_poly(q.clone()) * a.derive() / a;
            *p = q;
        }
        let (h, r) = hermite_reduce(&integrand);
        for term in rational_log_part(&r)? {
            let key = term.argument.coeffs().to_vec();
            let entry = logs.entry(key).or_insert_with(|| (term.argument.clone(), UPoly::zero()));
            entry.1 = &entry.1 + &UPoly::constant(term.coefficient);
        }
        logs.retain(|_, (_, p)| !p.is_zero());
        rational = h;
    }
    let (poly, proper) = rational.split_polynomial();
    let kept = UPoly::new((0..poly.coeffs().len()).map(|k| if k < n { Rational::zero() } else { poly.coeff(k) }).collect());
    let f0 = RatFunc::from_poly(kept) + proper;

    let mut tower = Tower::base();
    let mut eta = TowerExpr::base(f0.clone());
    let mut terms = Vec::new();
    for (k, (arg, p)) in logs.values().enumerate() {
        let u = RatFunc::from_poly(arg.clone());
        tower = tower.extend(&format!("L{}", k + 1), GeneratorKind::Log(TowerExpr::base(u.clone())))?;
        let theta = tower.gen_at(tower.len() - 1);
        eta = eta.try_add(&TowerExpr::base(RatFunc::from_poly(p.clone())).try_mul(&theta)?)?;
        terms.push((p.clone(), u));
    }
    let eta = eta.lift_to(&tower)?;
    let form = LiouvilleForm::new(n, f0, terms)?;
    Ok(ElementaryWitness { tower, eta, form })
}

/// The generator index when `g` lives over a tower with one generator of the
/// wanted kind, `None` when `g` lies in the base field.
fn single_generator(g: &TowerExpr, want: impl Fn(&GeneratorKind) -> bool, what: &str) -> Result<Option<(Arc<Tower>, usize)>, String> {
    let Some(t) = g.tower() else {
        return Ok(None);
    };
    if t.len() != 1 || !want(t.generator(0).kind()) {
        return Err(format!("expected a tower Q(x)({what}) with that single generator"));
    }
    Ok(Some((t.clone(), 0)))
}

/// Coefficients in the generator, each in `Q(x)`.
fn coefficients(g: &TowerExpr, gen: &Option<(Arc<Tower>, usize)>) -> Result<BTreeMap<i64, RatFunc>, Error> {
    let Some((_, i)) = gen else {
        return Ok([(0, g.as_base().expect("base element"))].into_iter().filter(|(_, c)| !c.is_zero()).collect());
    };
    g.laurent_normal(*i)?
        .into_iter()
        .map(|(k, c)| c.as_base().map(|c| (k, c)).ok_or(Error::TowerMismatch))
        .collect()
}

fn assemble(gen: &Option<(Arc<Tower>, usize)>, coeffs: &BTreeMap<i64, RatFunc>) -> Result<TowerExpr, Error> {
    match gen {
        None => Ok(TowerExpr::base(coeffs.get(&0).cloned().unwrap_or_else(RatFunc::zero))),
        Some((t, i)) => {
            let lifted = coeffs.iter().map(|(k, c)| (*k, TowerExpr::base(c.clone()))).collect();
            TowerExpr::from_laurent(t, *i, &lifted)
        }
    }
}

fn laurent_terms(c: &RatFunc) -> Option<BTreeMap<i64, Rational>> {
    if !c.is_laurent_in_x() {
        return None;
    }
    let s = c.den().deg() as i64;
    let lc = c.den().leading_coeff();
    Some(
        c.num()
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| (k as i64 - s, a / &lc))
            .collect(),
    )
}

fn from_laurent_terms(terms: &BTreeMap<i64, Rational>) -> RatFunc {
    terms.iter().fold(RatFunc::zero(), |acc, (k, a)| {
        acc + RatFunc::constant(a.clone()) * RatFunc::x().pow(*k).expect("x is nonzero")
    })
}

/// Decision for `Q(x)(t)`, `t = e^x`: ∞-integrable exactly when
/// `g = sum f_i t^i` with every `f_i` in `Q[x]`.
pub fn classify_exp(g: &TowerExpr, depth: usize) -> IntegrabilityVerdict {
    let x = TowerExpr::base(RatFunc::x());
    let gen = match single_generator(g, |k| matches!(k, GeneratorKind::Exp(u) if *u == x), "exp(x)") {
        Ok(gen) => gen,
        Err(why) => return IntegrabilityVerdict::NotSupported(why),
    };
    let coeffs = match coefficients(g, &gen) {
        Ok(c) => c,
        Err(e) => return IntegrabilityVerdict::NotIntegrable(Obstruction::NotLaurent(e.to_string())),
    };
    let mut polys = BTreeMap::new();
    for (k, c) in &coeffs {
        match c.as_polynomial() {
            Some(p) => polys.insert(*k, p.clone()),
            None => {
                return IntegrabilityVerdict::NotIntegrable(Obstruction::Coefficient {
                    power: *k,
                    coefficient: c.clone(),
                    ring: "Q[x]",
                })
            }
        };
    }
    for _ in 0..depth {
        for (i, p) in polys.iter_mut() {
            *p = if *i == 0 { p.integral() } else { exp_antiderivative(p, *i) };
        }
    }
    let out = polys.into_iter().map(|(k, p)| (k, RatFunc::from_poly(p))).collect();
    verdict(assemble(&gen, &out), depth)
}

/// The polynomial `h` with `h' + i h = f`, namely `sum_k (-1)^k f^(k) / i^(k+1)`,
/// so that `(h e^(ix))' = f e^(ix)`.
fn exp_antiderivative(f: &UPoly, i: i64) -> UPoly {
    let inv = Rational::one() / Rational::from_integer(i.into());
    let mut acc = UPoly::zero();
    let mut d = f.clone();
    let mut scale = inv.clone();
    while !d.is_zero() {
        acc = &acc + &d.scale(&scale);
        d = d.derivative();
        scale = -scale * inv.clone();
    }
    acc
}

/// Decision for `Q(x)(θ)`, `θ = log x`: ∞-integrable exactly when `g` is a
/// polynomial in `θ` with coefficients in `Q[x, 1/x]`.
pub fn classify_log(g: &TowerExpr, depth: usize) -> IntegrabilityVerdict {
    let x = TowerExpr::base(RatFunc::x());
    let gen = match single_generator(g, |k| matches!(k, GeneratorKind::Log(u) if *u == x), "log(x)") {
        Ok(gen) => gen,
        Err(why) => return IntegrabilityVerdict::NotSupported(why),
    };
    let coeffs = match coefficients(g, &gen) {
        Ok(c) => c,
        Err(e) => return IntegrabilityVerdict::NotIntegrable(Obstruction::NotLaurent(e.to_string())),
    };
    if let Some((k, c)) = coeffs.iter().find(|(k, _)| **k < 0) {
        return IntegrabilityVerdict::NotIntegrable(Obstruction::Coefficient {
            power: *k,
            coefficient: c.clone(),
            ring: "{0}",
        });
    }
    // (power of x, power of θ) -> coefficient
    let mut terms: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    for (k, c) in &coeffs {
        let Some(lt) = laurent_terms(c) else {
            return IntegrabilityVerdict::NotIntegrable(Obstruction::Coefficient {
                power: *k,
                coefficient: c.clone(),
                ring: "Q[x, 1/x]",
            });
        };
        for (m, a) in lt {
            terms.insert((m, *k), a);
        }
    }
    if gen.is_none() && terms.keys().any(|&(m, _)| m == -1) {
        return IntegrabilityVerdict::NotSupported("the antiderivative needs log(x); declare the tower".into());
    }
    for _ in 0..depth {
        let mut next: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for ((m, k), a) in &terms {
            for (key, b) in log_monomial_integral(*m, *k) {
                let e = next.entry(key).or_insert_with(Rational::zero);
                *e += a * b;
            }
        }
        next.retain(|_, v| !v.is_zero());
        terms = next;
    }
    let mut by_power: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
    for ((m, k), a) in terms {
        by_power.entry(k).or_default().insert(m, a);
    }
    let out = by_power.iter().map(|(k, lt)| (*k, from_laurent_terms(lt))).collect();
    verdict(assemble(&gen, &out), depth)
}

/// `int x^m θ^k` as a combination of `x^a θ^b`, by parts:
/// `x^(m+1) θ^k/(m+1) - k/(m+1) int x^m θ^(k-1)`, and `θ^(k+1)/(k+1)` for `m = -1`.
fn log_monomial_integral(m: i64, k: i64) -> BTreeMap<(i64, i64), Rational> {
    let mut out = BTreeMap::new();
    if m == -1 {
        out.insert((0, k + 1), Rational::new(1.into(), (k + 1).into()));
        return out;
    }
    let mut coeff = Rational::new(1.into(), (m + 1).into());
    let mut kk = k;
    loop {
        out.insert((m + 1, kk), coeff.clone());
        if kk == 0 {
            break;
        }
        coeff = -coeff * Rational::new(kk.into(), (m + 1).into());
        kk -= 1;
    }
    out
}

/// Decision for `Q(θ)`, `θ = x^(1/n)`: ∞-integrable exactly when
/// `g = sum_{i<n} f_i θ^i` with `f_0` in `Q[x]` and `f_i` in `Q[x, 1/x]`.
pub fn classify_radical(g: &TowerExpr, depth: usize) -> IntegrabilityVerdict {
    let gen = match single_generator(g, |k| matches!(k, GeneratorKind::Radical(_)), "x^(1/n)") {
        Ok(gen) => gen,
        Err(why) => return IntegrabilityVerdict::NotSupported(why),
    };
    let root = gen.as_ref().and_then(|(t, _)| t.radical()).map_or(1, |(_, n)| n as i64);
    let coeffs = match coefficients(g, &gen) {
        Ok(c) => c,
        Err(e) => return IntegrabilityVerdict::NotIntegrable(Obstruction::NotLaurent(e.to_string())),
    };
    let mut terms: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    for (i, c) in &coeffs {
        let bad = |ring| IntegrabilityVerdict::NotIntegrable(Obstruction::Coefficient { power: *i, coefficient: c.clone(), ring });
        if *i == 0 && !c.is_polynomial() {
            return bad("Q[x]");
        }
        let Some(lt) = laurent_terms(c) else {
            return bad("Q[x, 1/x]");
        };
        for (m, a) in lt {
            terms.insert((m, *i), a);
        }
    }
    for _ in 0..depth {
        // int x^m θ^i = x^(m+1) θ^i / (m + 1 + i/n)
        terms = terms
            .into_iter()
            .map(|((m, i), a)| {
                let e = Rational::from_integer((m + 1).into()) + Rational::new(i.into(), root.into());
                ((m + 1, i), a / e)
            })
            .collect();
    }
    let mut by_power: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
    for ((m, i), a) in terms {
        by_power.entry(i).or_default().insert(m, a);
    }
    let out = by_power.iter().map(|(i, lt)| (*i, from_laurent_terms(lt))).collect();
    verdict(assemble(&gen, &out), depth)
}

fn verdict(witness: Result<TowerExpr, Error>, depth: usize) -> IntegrabilityVerdict {
    match witness {
        Ok(witness) => IntegrabilityVerdict::Integrable { witness, depth },
        Err(e) => IntegrabilityVerdict::NotSupported(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfield::rf;

    fn poly(s: &str) -> UPoly {
        rf(s).as_polynomial().unwrap().clone()
    }

    #[test]
    fn liouville_form_of_one_over_x() {
        for n in 1..=6usize {
            let fact: i64 = (1..n as i64).product();
            let f1 = poly(&format!("x^{}/{fact}", n - 1));
            let form = LiouvilleForm::new(n, RatFunc::zero(), vec![(f1.clone(), rf("x"))]).unwrap();
            assert!(verify_liouville_form(&rf("1/x"), &form), "n = {n}");
            let off = LiouvilleForm::new(n, RatFunc::zero(), vec![(&f1 + &UPoly::one(), rf("x"))]).unwrap();
            assert!(!verify_liouville_form(&rf("1/x"), &off));
        }
        let f = rf("x^3/(x+1)");
        assert!(verify_liouville_form(&f.derive_n(2), &LiouvilleForm::new(2, f, vec![]).unwrap()));
        assert!(LiouvilleForm::new(2, RatFunc::zero(), vec![(poly("x^2"), rf("x"))]).is_err());
    }

    #[test]
    fn classic_checks() {
        let q = |n: i64| Rational::from_integer(n.into());
        assert!(liouville_classic_check(&rf("1/x"), &RatFunc::zero(), &[(q(1), rf("x"))]));
        assert!(liouville_classic_check(&rf("1"), &rf("x"), &[]));
        assert!(liouville_classic_check(&rf("2/(x^2-1)"), &RatFunc::zero(), &[(q(1), rf("x-1")), (q(-1), rf("x+1"))]));
        assert!(!liouville_classic_check(&rf("2/(x^2-1)"), &RatFunc::zero(), &[(q(1), rf("x-1"))]));
    }

    #[test]
    fn rational_integrability() {
        assert!(n_integrable_in_cx(&rf("x^2"), 5).is_integrable());
        assert_eq!(
            n_integrable_in_cx(&rf("1/x"), 1),
            IntegrabilityVerdict::NotIntegrable(Obstruction::SimplePole { step: 1, remainder: rf("1/x") })
        );
        assert_eq!(n_integrable_in_cx(&rf("1/x^2"), 1).witness(), Some(&TowerExpr::base(rf("-1/x"))));
        assert!(matches!(
            n_integrable_in_cx(&rf("1/x^2"), 2),
            IntegrabilityVerdict::NotIntegrable(Obstruction::SimplePole { step: 2, .. })
        ));
        assert!(infinity_integrable_in_cx(&rf("x^5")).is_integrable());
        assert!(!infinity_integrable_in_cx(&rf("1/x")).is_integrable());
        assert_eq!(
            infinity_integrable_in_cx(&rf("(x^2-1)/(x+2)")),
            IntegrabilityVerdict::NotIntegrable(Obstruction::ProperPart(rf("3/(x+2)")))
        );
    }

    #[test]
    fn elementary_witnesses() {
        for n in 1..=6usize {
            let w = elementary_n_witness(&rf("1/x"), n).unwrap();
            let fact: i64 = (1..n as i64).product();
            let expect = w.tower.parse(&format!("x^{}/{fact}*L1", n - 1)).unwrap();
            assert_eq!(w.eta, expect);
            assert_eq!(w.eta.derive_n(n), TowerExpr::base(rf("1/x")));
            assert!(verify_liouville_form(&rf("1/x"), &w.form));
        }
        let w = elementary_n_witness(&rf("x^3"), 2).unwrap();
        assert_eq!(w.eta, TowerExpr::base(rf("x^5/20")));
        let w = elementary_n_witness(&rf("1/(x^2-1)"), 1).unwrap();
        assert_eq!(w.eta.derive(), TowerExpr::base(rf("1/(x^2-1)")));
        assert_eq!(w.tower.len(), 2);
        let g = rf("(x^3 + 2)/(x^2 * (x - 3))");
        let w = elementary_n_witness(&g, 3).unwrap();
        assert_eq!(w.eta.derive_n(3), TowerExpr::base(g.clone()));
        assert!(verify_liouville_form(&g, &w.form));
        assert!(matches!(elementary_n_witness(&rf("1/(x^2-2)"), 1), Err(Error::NotSupported(_))));
    }

    #[test]
    fn exp_classifier() {
        let t = Tower::from_defs(&[("t", "exp(x)")]).unwrap();
        for (src, ok) in [("x*t + 1/t", true), ("t/x", false), ("t/(t+1)", false), ("x^2 - 3*t^2*x", true)] {
            let g = t.parse(src).unwrap();
            let v = classify_exp(&g, 2);
            assert_eq!(v.is_integrable(), ok, "{src}");
            if let Some(w) = v.witness() {
                assert_eq!(w.derive_n(2), g);
            }
        }
    }

    #[test]
    fn log_classifier() {
        let t = Tower::from_defs(&[("L", "log(x)")]).unwrap();
        for (src, ok) in [("L/x", true), ("L/(x+1)", false), ("x^2*L^3", true), ("1/L", false), ("L^2/x^3 + 1/x", true), ("x + 1/x", true)] {
            let g = t.parse(src).unwrap();
            let v = classify_log(&g, 3);
            assert_eq!(v.is_integrable(), ok, "{src}");
            if let Some(w) = v.witness() {
                assert_eq!(w.derive_n(3), g, "{src}");
            }
        }
    }

    #[test]
    fn radical_classifier() {
        let t = Tower::from_defs(&[("r", "x^(1/2)")]).unwrap();
        for (src, ok) in [("r", true), ("r/(x+1)", false), ("1/x", false), ("r/x^3 + x", true), ("1/r", true)] {
            let g = t.parse(src).unwrap();
            let v = classify_radical(&g, 2);
            assert_eq!(v.is_integrable(), ok, "{src}");
            if let Some(w) = v.witness() {
                assert_eq!(w.derive_n(2), g, "{src}");
            }
        }
    }

    #[test]
    fn constant_form() {
        let t = Tower::from_defs(&[("t", "exp(x)")]).unwrap();
        let g = t.parse("3 + t + 1/x^2").unwrap();
        let f = t.parse("t").unwrap();
        let cu = [(Rational::from_integer((-1).into()), t.parse("x").unwrap())];
        assert!(verify_constant_form(&g, &Rational::from_integer(3.into()), &f, &cu, 2));
        assert!(!verify_constant_form(&g, &Rational::zero(), &f, &cu, 2));
    }
}
