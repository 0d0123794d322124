use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GeneratorKind, Tower, TowerExpr};
use crate::diffop::{monicize, FTuple, SkewOp};
use crate::field::{DifferentialField, Field};
use crate::matrix::Matrix;
use crate::ratfield::RatFunc;
use crate::Error;

/// `sum_i c_i e^(i)` for an operator over the base field.
pub fn apply_operator(l: &SkewOp<RatFunc>, e: &TowerExpr) -> TowerExpr {
    let mut acc = TowerExpr::zero();
    let mut d = e.clone();
    for (i, c) in l.coeffs().iter().enumerate() {
        if i > 0 {
            d = d.derive();
        }
        if !c.is_zero() {
            acc = acc + TowerExpr::base(c.clone()) * d.clone();
        }
    }
    acc
}

/// Solutions `v1, ..., vn` of `L_f (f_{n+1} y) = 0` built from nested formal
/// integrals: `v1 = 1/f_{n+1}` and `vk = w_k / f_{n+1}` where
/// `w_k = int 1/fn int 1/f_{n-1} ... int 1/f_{n-k+2}`.
///
/// The integral `I{k}_{j}` is the `j`-th level of the chain for `w_k`.
pub fn nested_solutions(f: &FTuple<RatFunc>, f_next: &RatFunc) -> Result<(Arc<Tower>, Vec<TowerExpr>), Error> {
    if f_next.is_zero() {
        return Err(Error::ZeroEntry(f.len() + 1));
    }
    let n = f.len();
    let fs = f.entries();
    // fs[j - 1] is f_j
    let mut tower = Tower::base();
    let mut ws = vec![TowerExpr::one()];
    for k in 2..=n {
        let mut theta = TowerExpr::one();
        for j in 1..k {
            let integrand = theta.try_div(&TowerExpr::base(fs[n - k + j].clone()))?;
            tower = tower.extend(&format!("I{k}_{j}"), GeneratorKind::FormalIntegral(integrand))?;
            theta = tower.gen_at(tower.len() - 1);
        }
        ws.push(theta);
    }
    let inv = TowerExpr::base(f_next.inv());
    let vs = ws
        .into_iter()
        .map(|w| w.lift_to(&tower).map(|w| w * inv.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((tower, vs))
}

/// A fundamental matrix `T` with `T' = A T` for the shape matrix of
/// `(f2, ..., fn)`: row 1 holds the nested solutions of `L_f`, and row
/// `k + 1` is `f_{n-k+1}` times the derivative of row `k`.
pub fn fundamental_t(f_partial: &[RatFunc]) -> Result<Matrix<TowerExpr>, Error> {
    let f = monicize(f_partial)?;
    let n = f.len();
    let (_, w) = nested_solutions(&f, &RatFunc::one())?;
    let mut rows = vec![w];
    for k in 1..n {
        let fk = TowerExpr::base(f_partial[n - k - 1].clone());
        let next = rows[k - 1].iter().map(|e| fk.clone() * e.derive()).collect();
        rows.push(next);
    }
    Matrix::from_rows(rows)
}

/// `D^(n+1) - (f'/f) D^n`, which kills every `n`-fold antiderivative of `f`.
pub fn annihilator_of_iterated_integral(f: &RatFunc, n: usize) -> Result<SkewOp<RatFunc>, Error> {
    if f.is_zero() {
        return Err(Error::ZeroEntry(1));
    }
    let mut coeffs = vec![RatFunc::zero(); n + 2];
    coeffs[n + 1] = RatFunc::one();
    coeffs[n] = -(f.derive() / f.clone());
    Ok(SkewOp::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{build_lf, factor_recursion, shape_matrix};
    use crate::ratfield::rf;

    #[test]
    fn nested_solutions_are_killed() {
        let f = FTuple::new(vec![rf("1/(x^2+1)"), rf("x"), rf("x - 1"), rf("x^2")]).unwrap();
        let f_next = rf("x + 3");
        let l = build_lf(&f).mul(&SkewOp::mult(f_next.clone()));
        let (tower, vs) = nested_solutions(&f, &f_next).unwrap();
        assert_eq!(tower.len(), 6);
        for v in &vs {
            assert!(apply_operator(&l, v).is_zero(), "{v}");
        }
        let (g, g_next) = factor_recursion(&vs).unwrap();
        assert_eq!(g_next, TowerExpr::base(f_next));
        for (a, b) in g.entries().iter().zip(f.entries()).skip(1) {
            assert_eq!(a, &TowerExpr::base(b.clone()));
        }
    }

    #[test]
    fn fundamental_matrix() {
        let fp = [rf("x - 1"), rf("1/x"), rf("x^2 + 2")];
        let a = shape_matrix(&fp).unwrap().map(|e| TowerExpr::base(e.clone()));
        let t = fundamental_t(&fp).unwrap();
        let lhs = t.derive();
        let rhs = a.try_mul(&t).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(t.row(3), &[TowerExpr::zero(), TowerExpr::zero(), TowerExpr::zero(), TowerExpr::one()][..]);
    }

    #[test]
    fn iterated_integral() {
        let l = annihilator_of_iterated_integral(&rf("1/x"), 2).unwrap();
        let t = Tower::from_defs(&[("L", "log(x)")]).unwrap();
        let y = t.parse("x*L + 4*x - 7").unwrap();
        assert!(apply_operator(&l, &y).is_zero());
        assert_eq!(annihilator_of_iterated_integral(&RatFunc::zero(), 1), Err(Error::ZeroEntry(1)));
    }
}
