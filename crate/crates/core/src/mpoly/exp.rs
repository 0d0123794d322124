use num_traits::Zero;

use super::{buchberger, MPoly, MonomialOrder};
use crate::field::{factorial, Field};
use crate::matrix::Matrix;
use crate::{Error, Rational};

/// `exp(X) = sum_{k<n} X^k / k!` for a strictly upper triangular `X`.
pub fn nilpotent_exp<K: Field>(x: &Matrix<MPoly<K>>) -> Result<Matrix<MPoly<K>>, Error> {
    if !x.is_square() {
        return Err(Error::Shape("exp of a non-square matrix".into()));
    }
    if !x.is_strictly_upper() {
        return Err(Error::NotNilpotent);
    }
    let n = x.rows();
    let mut acc = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for k in 1..n {
        power = power.try_mul(x)?;
        if power.is_zero() {
            break;
        }
        let inv = K::from_rational(Rational::from_integer(1.into()) / factorial(k));
        acc = acc.try_add(&power.map(|p| p.scale(&inv)))?;
    }
    Ok(acc)
}

/// Generators of `<gens> ∩ K[v_first, ...]`: a reduced Gröbner basis under
/// the block order that ranks the first `first` variables above the rest,
/// restricted to the generators free of them.
pub fn eliminate<K: Field>(gens: &[MPoly<K>], first: usize, budget: u64) -> Result<Vec<MPoly<K>>, Error> {
    let order = if first == 0 { MonomialOrder::DegRevLex } else { MonomialOrder::Block { first } };
    let gb = buchberger(gens, order, budget)?;
    Ok(gb
        .generators()
        .iter()
        .filter(|g| (0..first).all(|i| !g.uses_var(i)))
        .filter(|g| !g.is_zero())
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{VarSet, DEFAULT_BUDGET};
    use crate::MPolyQ;

    fn sym(vs: &VarSet, rows: &[&[&str]]) -> Matrix<MPolyQ> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| vs.parse(s).unwrap()).collect()).collect()).unwrap()
    }

    #[test]
    fn exp_examples() {
        let vs = VarSet::parameters(2);
        let x = sym(&vs, &[&["0", "x1"], &["0", "0"]]);
        assert_eq!(nilpotent_exp(&x).unwrap(), sym(&vs, &[&["1", "x1"], &["0", "1"]]));
        let x = sym(&vs, &[&["0", "x1", "0"], &["0", "0", "x2"], &["0", "0", "0"]]);
        let e = nilpotent_exp(&x).unwrap();
        assert_eq!(e[(0, 2)], vs.parse("x1*x2/2").unwrap());
        let minus = nilpotent_exp(&x.map(|p| -p.clone())).unwrap();
        assert_eq!(e.try_mul(&minus).unwrap(), Matrix::identity(3));
        assert_eq!(nilpotent_exp(&Matrix::<MPolyQ>::zeros(3, 3)).unwrap(), Matrix::identity(3));
        let bad = sym(&vs, &[&["x1", "0"], &["0", "0"]]);
        assert!(matches!(nilpotent_exp(&bad), Err(Error::NotNilpotent)));
    }

    #[test]
    fn elimination() {
        // x1, x2, then Z_1_2, Z_1_3, Z_2_3
        let vs = VarSet::parameters(2).concat(&VarSet::coordinates(3)).unwrap();
        let gens: Vec<MPolyQ> =
            ["Z_1_2 - x1", "Z_1_3 - x2", "Z_2_3"].iter().map(|s| vs.parse(s).unwrap()).collect();
        let out = eliminate(&gens, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(out, vec![vs.parse::<Rational>("Z_2_3").unwrap()]);

        let vs = VarSet::parameters(3).concat(&VarSet::coordinates(3)).unwrap();
        let gens: Vec<MPolyQ> = ["Z_1_2 - x1", "Z_2_3 - x2", "Z_1_3 - x3 - x1*x2/2"]
            .iter()
            .map(|s| vs.parse(s).unwrap())
            .collect();
        assert!(eliminate(&gens, 3, DEFAULT_BUDGET).unwrap().is_empty());
    }
}
