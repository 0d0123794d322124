use num_traits::{One, Zero};

use super::{MPoly, Monomial, MonomialOrder};
use crate::field::Field;
use crate::Error;

/// Default cap on reduction steps for one Buchberger run.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A reduced Gröbner basis: monic, auto-reduced, sorted by descending
/// leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<K> {
    gens: Vec<MPoly<K>>,
    order: MonomialOrder,
}

impl<K: Field> GroebnerBasis<K> {
    /// The zero ideal.
    pub fn zero_ideal(order: MonomialOrder) -> Self {
        GroebnerBasis { gens: Vec::new(), order }
    }

    pub fn generators(&self) -> &[MPoly<K>] {
        &self.gens
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The unique remainder of `p` modulo the basis.
    pub fn normal_form(&self, p: &MPoly<K>) -> MPoly<K> {
        let mut steps = 0;
        reduce_full(p, &self.gens, self.order, &mut steps, u64::MAX).expect("unbounded")
    }

    pub fn contains(&self, p: &MPoly<K>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Extends coefficients to a bigger field; a reduced basis stays reduced.
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> GroebnerBasis<L> {
        GroebnerBasis { gens: self.gens.iter().map(|g| g.map_coeffs(&f)).collect(), order: self.order }
    }
}

/// `lcm/lt(f) * f - lcm/lt(g) * g`, both leading terms normalized to 1.
pub fn s_polynomial<K: Field>(f: &MPoly<K>, g: &MPoly<K>, order: MonomialOrder) -> MPoly<K> {
    let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(order), g.leading_term(order)) else {
        return MPoly::zero();
    };
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf).expect("lcm"), &cf.inv());
    let b = g.mul_term(&l.div(mg).expect("lcm"), &cg.inv());
    &a - &b
}

/// Full reduction of `p` by `gens`; counts one step per cancelled term.
fn reduce_full<K: Field>(
    p: &MPoly<K>,
    gens: &[MPoly<K>],
    order: MonomialOrder,
    steps: &mut u64,
    budget: u64,
) -> Result<MPoly<K>, Error> {
    let leads: Vec<(Monomial, K)> = gens
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(order).expect("nonzero generator");
            (m.clone(), c.inv())
        })
        .collect();
    let mut p = p.clone();
    let mut rem = MPoly::zero();
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        *steps += 1;
        if *steps > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let q = m.div(&leads[k].0).expect("divides");
                let coef = c * leads[k].1.clone();
                p = &p - &gens[k].mul_term(&q, &coef);
            }
            None => {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
    }
    Ok(rem)
}

/// A critical pair with its lcm and sugar degree.
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed by lowest sugar degree; the Gebauer-Möller criteria
/// drop pairs that cannot contribute. Aborts with `BudgetExceeded` once more
/// than `budget` reduction steps were spent.
pub fn buchberger<K: Field>(
    gens: &[MPoly<K>],
    order: MonomialOrder,
    budget: u64,
) -> Result<GroebnerBasis<K>, Error> {
    let mut steps = 0u64;
    let mut basis: Vec<MPoly<K>> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut input: Vec<MPoly<K>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    input.sort_by(|a, b| order.cmp(lead(a, order), lead(b, order)));
    for g in input {
        let r = reduce_full(&g, &basis, order, &mut steps, budget)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis { gens: vec![MPoly::one()], order });
        }
        let deg = r.total_degree();
        add_to_basis(&mut basis, &mut sugar, &mut pairs, r.monic(order), deg, order);
    }
    while let Some(k) = select(&pairs, order) {
        let Pair { i, j, sugar: s, .. } = pairs.swap_remove(k);
        let sp = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce_full(&sp, &basis, order, &mut steps, budget)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis { gens: vec![MPoly::one()], order });
        }
        let s = s.max(r.total_degree());
        add_to_basis(&mut basis, &mut sugar, &mut pairs, r.monic(order), s, order);
    }
    Ok(GroebnerBasis { gens: interreduce(basis, order, &mut steps, budget)?, order })
}

fn lead<K: Field>(p: &MPoly<K>, order: MonomialOrder) -> &Monomial {
    p.leading_monomial(order).expect("nonzero")
}

fn select(pairs: &[Pair], order: MonomialOrder) -> Option<usize> {
    (0..pairs.len()).min_by(|&a, &b| {
        let (p, q) = (&pairs[a], &pairs[b]);
        p.sugar.cmp(&q.sugar).then_with(|| order.cmp(&p.lcm, &q.lcm))
    })
}

/// Adds `h` and updates the pair list with the Gebauer-Möller criteria.
fn add_to_basis<K: Field>(
    basis: &mut Vec<MPoly<K>>,
    sugar: &mut Vec<u32>,
    pairs: &mut Vec<Pair>,
    h: MPoly<K>,
    h_sugar: u32,
    order: MonomialOrder,
) {
    let k = basis.len();
    let lh = lead(&h, order).clone();
    let lcm_with = |i: usize| lead(&basis[i], order).lcm(&lh);
    // old pairs whose lcm is a proper multiple of the new chains
    pairs.retain(|p| !(lh.divides(&p.lcm) && lcm_with(p.i) != p.lcm && lcm_with(p.j) != p.lcm));

    let mut fresh: Vec<(Pair, bool)> = (0..k)
        .map(|i| {
            let li = lead(&basis[i], order);
            let lcm = li.lcm(&lh);
            let s = (sugar[i] + lcm.degree() - li.degree()).max(h_sugar + lcm.degree() - lh.degree());
            (Pair { i, j: k, lcm, sugar: s }, li.is_coprime(&lh))
        })
        .collect();
    // drop pairs whose lcm is a proper multiple of another new lcm
    let lcms: Vec<Monomial> = fresh.iter().map(|(p, _)| p.lcm.clone()).collect();
    fresh.retain(|(p, _)| !lcms.iter().any(|m| m.divides(&p.lcm) && *m != p.lcm));
    // among equal lcms keep one, and none at all when one of them is coprime
    let mut kept: Vec<Pair> = Vec::new();
    let mut seen: Vec<Monomial> = Vec::new();
    for (p, coprime) in &fresh {
        if seen.contains(&p.lcm) {
            continue;
        }
        let any_coprime = fresh.iter().any(|(q, c)| q.lcm == p.lcm && *c);
        seen.push(p.lcm.clone());
        if !any_coprime && !coprime {
            kept.push(Pair { i: p.i, j: p.j, lcm: p.lcm.clone(), sugar: p.sugar });
        }
    }
    pairs.extend(kept);
    basis.push(h);
    sugar.push(h_sugar);
}

/// Minimalizes and auto-reduces a Gröbner basis.
fn interreduce<K: Field>(
    basis: Vec<MPoly<K>>,
    order: MonomialOrder,
    steps: &mut u64,
    budget: u64,
) -> Result<Vec<MPoly<K>>, Error> {
    let lm = |p: &MPoly<K>| p.leading_monomial(order).expect("nonzero").clone();
    let mut minimal: Vec<MPoly<K>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let m = lm(g);
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let mh = lm(h);
            j != k && mh.divides(&m) && (mh != m || j < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<MPoly<K>> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g.clone()).collect();
        let r = reduce_full(&minimal[k], &others, order, steps, budget)?;
        out.push(r.monic(order));
    }
    out.sort_by(|a, b| order.cmp(&lm(b), &lm(a)));
    Ok(out)
}
