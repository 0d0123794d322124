#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use unipotent_core::mpoly::{MPoly, Monomial};
use unipotent_core::{MPolyQ, RatFunc, Rational, UPoly};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(UPoly::new)
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    (prop::collection::vec(rational(), 0..=max_deg), nonzero_rational()).prop_map(|(mut c, lead)| {
        c.push(lead);
        UPoly::new(c)
    })
}

pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), nonzero_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

/// Numerator and denominator of degree at most one.
pub fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(1), nonzero_poly(1)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

pub fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    (nonzero_poly(2), nonzero_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

/// A polynomial in `vars` variables with at most `terms` terms.
pub fn mpoly(vars: usize, max_exp: u32, terms: usize) -> impl Strategy<Value = MPolyQ> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, vars), rational()), 1..=terms)
        .prop_map(|ts| MPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::new(e), c))))
}

fn small(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3))
}

fn small_nonzero(rng: &mut impl Rng) -> Rational {
    loop {
        let c = small(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A nonzero entry of the kind used for random operator tuples: a constant,
/// a linear, or a quadratic rational function.
pub fn random_entry(rng: &mut impl Rng) -> RatFunc {
    let lead = small_nonzero(rng);
    match rng.gen_range(0..4) {
        0 => RatFunc::constant(lead),
        1 => RatFunc::from_poly(UPoly::new(vec![small(rng), lead])),
        2 => RatFunc::from_poly(UPoly::new(vec![small(rng), small(rng), lead])),
        _ => {
            let num = UPoly::new(vec![small(rng), small_nonzero(rng)]);
            let den = UPoly::new(vec![small(rng), small(rng), lead]);
            RatFunc::new(num, den).unwrap()
        }
    }
}

/// Derivative by the quotient rule on numerator and denominator, kept apart
/// from the field's own derivation.
pub fn quotient_rule(f: &RatFunc) -> RatFunc {
    let (p, d) = (f.num(), f.den());
    let num = &(&p.derivative() * d) - &(p * &d.derivative());
    RatFunc::new(num, d * d).unwrap()
}
