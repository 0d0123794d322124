mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use unipotent_core::integrab::{
    classify_exp, classify_log, classify_radical, elementary_n_witness, infinity_integrable_in_cx, n_integrable_in_cx,
    verify_liouville_form, IntegrabilityVerdict, Obstruction,
};
use unipotent_core::ratfield::antiderivative_in_field;
use unipotent_core::tower::{Tower, TowerExpr};
use unipotent_core::{DifferentialField, RatFunc};

/// A polynomial plus partial fractions `c / (x - a)^k` with rational poles.
fn split_ratfunc() -> impl Strategy<Value = RatFunc> {
    let pole = (-4i64..=4, 1i32..=3, nonzero_rational());
    (poly(3), prop::collection::vec(pole, 0..=3)).prop_map(|(p, poles)| {
        poles.into_iter().fold(RatFunc::from_poly(p), |acc, (a, k, c)| {
            acc + RatFunc::constant(c) / RatFunc::x_minus(q(a, 1)).pow(k as i64).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn witnesses_rederive(g in split_ratfunc(), n in 1usize..=4) {
        if let IntegrabilityVerdict::Integrable { witness, depth } = n_integrable_in_cx(&g, n) {
            prop_assert_eq!(depth, n);
            prop_assert_eq!(witness.derive_n(n), TowerExpr::base(g));
        }
    }

    #[test]
    fn integrability_is_monotone(g in split_ratfunc(), n in 1usize..=4) {
        if n_integrable_in_cx(&g, n).is_integrable() {
            for m in 1..n {
                prop_assert!(n_integrable_in_cx(&g, m).is_integrable());
            }
        }
    }

    #[test]
    fn obstructions_are_sound(g in split_ratfunc(), n in 1usize..=4) {
        match n_integrable_in_cx(&g, n) {
            IntegrabilityVerdict::NotIntegrable(Obstruction::SimplePole { step, remainder }) => {
                prop_assert!(step >= 1 && step <= n);
                prop_assert!(!remainder.is_zero());
                prop_assert!(remainder.split_polynomial().0.is_zero());
                let d = remainder.den();
                prop_assert!(d.gcd(&d.derivative()).is_constant());
                prop_assert!(antiderivative_in_field(&remainder).is_err());
            }
            IntegrabilityVerdict::Integrable { .. } => {}
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }
    }

    #[test]
    fn infinity_integrable_iff_polynomial(g in split_ratfunc()) {
        prop_assert_eq!(infinity_integrable_in_cx(&g).is_integrable(), g.den().is_constant());
    }

    #[test]
    fn elementary_witness_shape(g in split_ratfunc(), n in 1usize..=4) {
        let w = elementary_n_witness(&g, n).unwrap();
        prop_assert_eq!(w.eta.derive_n(n), TowerExpr::base(g.clone()));
        prop_assert!(verify_liouville_form(&g, &w.form));
        for (p, _) in w.form.terms() {
            prop_assert!(p.deg() < n);
        }
    }

    #[test]
    fn exp_polynomial_coefficients_integrate(cs in prop::collection::vec(poly(2), 1..=3), shift in -1i64..=1, depth in 1usize..=3) {
        let t = Tower::from_defs(&[("t", "exp(x)")]).unwrap();
        let theta = t.gen("t").unwrap();
        let g = cs.iter().enumerate().fold(TowerExpr::zero(), |acc, (i, c)| {
            acc + TowerExpr::base(RatFunc::from_poly(c.clone())) * theta.pow(i as i64 + shift).unwrap()
        });
        let v = classify_exp(&g, depth);
        prop_assert!(v.is_integrable(), "{}", g);
        prop_assert_eq!(v.witness().unwrap().derive_n(depth), g.clone());
        let spoiled = g + theta / TowerExpr::base(RatFunc::x_minus(q(1, 1)));
        prop_assert!(!classify_exp(&spoiled, depth).is_integrable());
    }

    #[test]
    fn log_laurent_coefficients_integrate(cs in prop::collection::vec((poly(2), 0i32..=2), 1..=3), depth in 1usize..=3) {
        let t = Tower::from_defs(&[("L", "log(x)")]).unwrap();
        let theta = t.gen("L").unwrap();
        let g = cs.iter().enumerate().fold(TowerExpr::zero(), |acc, (i, (c, k))| {
            let coeff = RatFunc::from_poly(c.clone()) / RatFunc::x().pow(*k as i64).unwrap();
            acc + TowerExpr::base(coeff) * theta.pow(i as i64).unwrap()
        });
        let v = classify_log(&g, depth);
        prop_assert!(v.is_integrable(), "{}", g);
        prop_assert_eq!(v.witness().unwrap().derive_n(depth), g);
    }

    #[test]
    fn radical_laurent_coefficients_integrate(n in 2u32..=3, cs in prop::collection::vec((poly(2), 0i32..=2), 1..=3), depth in 1usize..=3) {
        let t = Tower::from_defs(&[("r", format!("x^(1/{n})").as_str())]).unwrap();
        let theta = t.gen("r").unwrap();
        // powers below n, so that θ^n = x never folds a coefficient into the constant term
        let g = cs.iter().take(n as usize).enumerate().fold(TowerExpr::zero(), |acc, (i, (c, k))| {
            // the constant term must stay polynomial
            let k = if i == 0 { 0 } else { *k };
            let coeff = RatFunc::from_poly(c.clone()) / RatFunc::x().pow(k as i64).unwrap();
            acc + TowerExpr::base(coeff) * theta.pow(i as i64).unwrap()
        });
        let v = classify_radical(&g, depth);
        prop_assert!(v.is_integrable(), "{}", g);
        prop_assert_eq!(v.witness().unwrap().derive_n(depth), g);
    }
}
