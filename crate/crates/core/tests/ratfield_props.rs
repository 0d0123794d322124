mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use unipotent_core::ratfield::{hermite_reduce, rational_log_part};
use unipotent_core::{DifferentialField, RatFunc, UPoly};

proptest! {
    #[test]
    fn derivative_matches_quotient_rule(f in ratfunc()) {
        prop_assert_eq!(f.derive(), quotient_rule(&f));
    }

    #[test]
    fn derivation_is_linear(f in ratfunc(), g in ratfunc(), c in rational()) {
        let c = RatFunc::constant(c);
        let lhs = (c.clone() * f.clone() + g.clone()).derive();
        prop_assert_eq!(lhs, c * f.derive() + g.derive());
    }

    #[test]
    fn leibniz(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!((f.clone() * g.clone()).derive(), f.derive() * g.clone() + f * g.derive());
    }

    #[test]
    fn canonical_form_is_unique(f in ratfunc(), k in nonzero_poly(2)) {
        prop_assert!(f.den().leading_coeff().is_one());
        prop_assert!(f.num().gcd(f.den()).is_constant());
        let scaled = RatFunc::new(f.num() * &k, f.den() * &k).unwrap();
        prop_assert_eq!(&scaled, &f);
        let reparsed: RatFunc = f.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, f);
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in ratfunc(), g in ratfunc(), at in rational()) {
        if let (Some(a), Some(b)) = (f.eval(&at), g.eval(&at)) {
            prop_assert_eq!((f.clone() * g.clone()).eval(&at), Some(&a * &b));
            prop_assert_eq!((f + g).eval(&at), Some(a + b));
        }
    }

    #[test]
    fn hermite_round_trip(f in ratfunc()) {
        let (h, r) = hermite_reduce(&f);
        prop_assert_eq!(h.derive() + r.clone(), f);
        prop_assert!(r.split_polynomial().0.is_zero());
        let d = r.den();
        prop_assert!(d.gcd(&d.derivative()).is_constant());
    }

    #[test]
    fn log_part_reconstructs(roots in prop::collection::btree_set(-5i64..=5, 1..4), cs in prop::collection::vec(nonzero_rational(), 3)) {
        // sum c_i / (x - a_i): rational residues, so the log part always exists
        let r = roots.iter().zip(&cs).fold(RatFunc::zero(), |acc, (a, c)| {
            acc + RatFunc::constant(c.clone()) / RatFunc::x_minus(q(*a, 1))
        });
        let terms = rational_log_part(&r).unwrap();
        let back = terms.iter().fold(RatFunc::zero(), |acc, t| {
            let v = RatFunc::from_poly(t.argument.clone());
            acc + RatFunc::constant(t.coefficient.clone()) * v.derive() / v
        });
        prop_assert_eq!(back, r);
        for t in &terms {
            prop_assert!(!t.coefficient.is_zero());
            prop_assert!(t.argument.leading_coeff().is_one());
        }
    }
}

#[test]
fn irrational_residues_are_refused() {
    let r = RatFunc::new(UPoly::one(), UPoly::new(vec![q(-2, 1), q(0, 1), q(1, 1)])).unwrap();
    assert!(rational_log_part(&r).is_err());
}
