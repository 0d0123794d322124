//! The skew ring `K[D]` with `D f = f D + f'`, the operators
//! `L_f = f1 D f2 D ... fl D`, companion matrices and gauge transforms.

use std::fmt;

use num_traits::Zero;

use crate::field::{binomial, DifferentialField, Field};
use crate::matrix::Matrix;
use crate::mpoly::has_top_level_sum;
use crate::parse::{EvalContext, Expr};
use crate::tower::TowerExpr;
use crate::{Error, Rational};

/// `sum coeffs[i] * D^i`, with no trailing zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewOp<K> {
    coeffs: Vec<K>,
}

impl<K: DifferentialField> SkewOp<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewOp { coeffs }
    }

    pub fn zero() -> Self {
        SkewOp { coeffs: Vec::new() }
    }

    /// Multiplication by `f`.
    pub fn mult(f: K) -> Self {
        Self::new(vec![f])
    }

    /// `D^k`
    pub fn d_pow(k: usize) -> Self {
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = K::one();
        SkewOp { coeffs }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    /// `f * self`
    pub fn scale_left(&self, f: &K) -> Self {
        Self::new(self.coeffs.iter().map(|c| f.clone() * c.clone()).collect())
    }

    /// `D * self`, i.e. `sum (c_j' D^j + c_j D^{j+1})`.
    pub fn d_times(&self) -> Self {
        let n = self.coeffs.len();
        Self::new(
            (0..=n)
                .map(|j| {
                    let a = if j < n { self.coeffs[j].derive() } else { K::zero() };
                    let b = if j > 0 { self.coeffs[j - 1].clone() } else { K::zero() };
                    a + b
                })
                .collect(),
        )
    }

    /// The product in `K[D]`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut acc = Self::zero();
        let mut d_i = rhs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d_i = d_i.d_times();
            }
            if !a.is_zero() {
                acc = acc.add(&d_i.scale_left(a));
            }
        }
        acc
    }

    /// `sum c_i * f^(i)` for an element of the coefficient field.
    pub fn apply(&self, f: &K) -> K {
        let mut acc = K::zero();
        let mut d = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive();
            }
            if !c.is_zero() {
                acc = acc + c.clone() * d.clone();
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Panics on the zero operator.
    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff().inv();
        self.scale_left(&lc)
    }

    pub fn map<L: DifferentialField>(&self, f: impl Fn(&K) -> L) -> SkewOp<L> {
        SkewOp::new(self.coeffs.iter().map(f).collect())
    }
}

/// `D * f = f * D + f'` as operators.
pub fn skew_mul<K: DifferentialField>(l1: &SkewOp<K>, l2: &SkewOp<K>) -> SkewOp<K> {
    l1.mul(l2)
}

impl<K: DifferentialField> fmt::Display for SkewOp<K> {
    /// `D^3 + (2/x)*D^2 + (c)`, highest order first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = match k {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{k}"),
            };
            let cs = c.to_string();
            if k == 0 {
                if has_top_level_sum(&cs) || cs.starts_with('-') {
                    write!(f, "({cs})")?;
                } else {
                    write!(f, "{cs}")?;
                }
            } else if c.is_one() {
                write!(f, "{d}")?;
            } else {
                write!(f, "({cs})*{d}")?;
            }
        }
        Ok(())
    }
}

/// A tuple of nonzero field elements `(f1, ..., fl)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FTuple<K> {
    entries: Vec<K>,
}

impl<K: DifferentialField> FTuple<K> {
    /// Fails with `ZeroEntry(i)` (1-based) on a zero entry.
    pub fn new(entries: Vec<K>) -> Result<Self, Error> {
        check_nonzero(&entries, 1)?;
        Ok(FTuple { entries })
    }

    pub fn entries(&self) -> &[K] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_nonzero<K: Field>(entries: &[K], base: usize) -> Result<(), Error> {
    match entries.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::ZeroEntry(i + base)),
        None => Ok(()),
    }
}

/// `L_f = f1 D f2 D ... fl D`, expanded.
pub fn build_lf<K: DifferentialField>(f: &FTuple<K>) -> SkewOp<K> {
    let mut acc = SkewOp::mult(K::one());
    for fi in f.entries.iter().rev() {
        acc = acc.d_times().scale_left(fi);
    }
    acc
}

/// Completes `(f2, ..., fn)` with `f1 = 1/(f2 ... fn)`, which makes `L_f` monic.
pub fn monicize<K: DifferentialField>(f_partial: &[K]) -> Result<FTuple<K>, Error> {
    check_nonzero(f_partial, 2)?;
    let prod = f_partial.iter().fold(K::one(), |acc, f| acc * f.clone());
    let mut entries = vec![prod.inv()];
    entries.extend(f_partial.iter().cloned());
    Ok(FTuple { entries })
}

/// `A = sum_{i=1}^{n-1} (1/f_{n-i+1}) E_{i,i+1}` from `(f2, ..., fn)`: the
/// superdiagonal reads `1/fn, ..., 1/f2` top to bottom.
pub fn shape_matrix<K: DifferentialField>(f_partial: &[K]) -> Result<Matrix<K>, Error> {
    check_nonzero(f_partial, 2)?;
    let n = f_partial.len() + 1;
    let mut a = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = f_partial[n - 2 - i].inv();
    }
    Ok(a)
}

/// `B A B^{-1} + B' B^{-1}`.
pub fn gauge_transform<K: DifferentialField>(a: &Matrix<K>, b: &Matrix<K>) -> Result<Matrix<K>, Error> {
    let binv = b.inverse()?;
    let left = b.try_mul(a)?.try_mul(&binv)?;
    left.try_add(&b.derive().try_mul(&binv)?)
}

/// True for the shape with ones on the superdiagonal and zeros elsewhere
/// outside the last row.
pub fn is_companion<K: DifferentialField>(a: &Matrix<K>) -> bool {
    let n = a.rows();
    a.is_square()
        && (0..n.saturating_sub(1)).all(|i| {
            (0..n).all(|j| if j == i + 1 { a[(i, j)].is_one() } else { a[(i, j)].is_zero() })
        })
}

/// Companion matrix of a monic `D^n + sum a_i D^i`: last row `(-a_0, ..., -a_{n-1})`.
pub fn companion_of<K: DifferentialField>(l: &SkewOp<K>) -> Result<Matrix<K>, Error> {
    let n = l.order().ok_or(Error::NotMonic)?;
    if !l.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = K::one();
    }
    if n > 0 {
        for j in 0..n {
            m[(n - 1, j)] = -l.coeff(j);
        }
    }
    Ok(m)
}

/// Inverse of [`companion_of`].
pub fn operator_of<K: DifferentialField>(a: &Matrix<K>) -> Result<SkewOp<K>, Error> {
    if !is_companion(a) {
        return Err(Error::Shape("not a companion matrix".into()));
    }
    let n = a.rows();
    let mut coeffs: Vec<K> = (0..n).map(|j| -a[(n - 1, j)].clone()).collect();
    coeffs.push(K::one());
    Ok(SkewOp::new(coeffs))
}

/// Recovers `f_{n+1} = 1/v1` and `(f1, ..., fn)` from solutions `v1, ..., vn`
/// in a tower, using
/// `f_{n-i} = 1/(f_{n-i+1}(... (f_n (f_{n+1} v_{i+2})')' ...)')'`.
///
/// `f1` is chosen as `1/(f2 ... fn f_{n+1})` so that `L_f f_{n+1}` is monic.
/// Fails with `DependentSolutions(i)` when the `i`-th step divides by zero.
pub fn factor_recursion(v: &[TowerExpr]) -> Result<(FTuple<TowerExpr>, TowerExpr), Error> {
    let n = v.len();
    if n == 0 || v[0].is_zero() {
        return Err(Error::DependentSolutions(1));
    }
    let f_next = v[0].inv();
    // f[k] holds f_{k}; index 0 and 1 unused until the end.
    let mut f: Vec<Option<TowerExpr>> = vec![None; n + 2];
    f[n + 1] = Some(f_next.clone());
    for i in 0..n.saturating_sub(1) {
        // w = (f_{n-i+1} (... (f_n (f_{n+1} v_{i+2})')' ...)')
        let mut w = (f_next.clone() * v[i + 1].clone()).derive();
        for k in (n - i + 1..=n).rev() {
            w = (f[k].clone().expect("computed") * w).derive();
        }
        if w.is_zero() {
            return Err(Error::DependentSolutions(i + 2));
        }
        f[n - i] = Some(w.inv());
    }
    let mut partial: Vec<TowerExpr> = (2..=n).map(|k| f[k].clone().expect("computed")).collect();
    partial.push(f_next.clone());
    let full = monicize(&partial)?;
    let mut entries = full.entries;
    entries.pop();
    Ok((FTuple { entries }, f_next))
}

/// Parses operators written with `D` for the derivation, e.g.
/// `D^2 + (1/x)*D`. Division is allowed only by order-zero operators.
pub struct OperatorContext<C> {
    pub coeffs: C,
}

impl<C: EvalContext> EvalContext for OperatorContext<C>
where
    C::Value: DifferentialField,
{
    type Value = SkewOp<C::Value>;

    fn constant(&self, q: Rational) -> Self::Value {
        SkewOp::mult(self.coeffs.constant(q))
    }

    fn variable(&self, name: &str) -> Result<Self::Value, Error> {
        if name == "D" {
            Ok(SkewOp::d_pow(1))
        } else {
            self.coeffs.variable(name).map(SkewOp::mult)
        }
    }

    fn call(&self, name: &str, arg: &Expr) -> Result<Self::Value, Error> {
        self.coeffs.call(name, arg).map(SkewOp::mult)
    }

    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error> {
        Ok(a.add(&b))
    }

    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error> {
        Ok(a.sub(&b))
    }

    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error> {
        Ok(a.mul(&b))
    }

    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error> {
        match b.order() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(a.mul(&SkewOp::mult(b.coeff(0).inv()))),
            Some(_) => Err(Error::Parse { pos: 0, msg: "division by an operator of positive order".into() }),
        }
    }

    fn pow(&self, base: Self::Value, base_expr: &Expr, e: &Rational) -> Result<Self::Value, Error> {
        if base.order() == Some(0) {
            return self.coeffs.pow(base.coeff(0), base_expr, e).map(SkewOp::mult);
        }
        if !e.is_integer() || e < &Rational::zero() {
            return Err(Error::Parse { pos: 0, msg: "operator powers must be nonnegative integers".into() });
        }
        let k: u32 = e.to_integer().try_into().map_err(|_| Error::Parse { pos: 0, msg: "exponent too large".into() })?;
        let mut acc = SkewOp::mult(<C::Value as num_traits::One>::one());
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// Parses an operator over `Q(x)`.
pub fn parse_operator(src: &str) -> Result<SkewOp<crate::RatFunc>, Error> {
    OperatorContext { coeffs: crate::parse::RatFuncContext }.parse(src)
}

/// `(binom(i-1, j-1) * c^{(i-j)})`: the lower-triangular matrix of the
/// Leibniz rule for `y -> c*y` acting on `(y, y', ..., y^{(n-1)})`.
pub(crate) fn leibniz_matrix<K: DifferentialField>(c: &K, n: usize) -> Matrix<K> {
    let mut derivs = vec![c.clone()];
    for k in 1..n {
        derivs.push(derivs[k - 1].derive());
    }
    Matrix::from_fn(n, n, |i, j| {
        if j > i {
            K::zero()
        } else {
            K::from_rational(binomial(i, j)) * derivs[i - j].clone()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::ratfield::rf;
    use crate::{MatrixF, Operator, RatFunc};

    fn op(s: &str) -> Operator {
        parse_operator(s).unwrap()
    }

    #[test]
    fn defining_rule() {
        assert_eq!(op("D").mul(&op("x")), op("x*D + 1"));
        assert_eq!(op("D").mul(&op("D")), op("D^2"));
        assert_eq!(op("D*x"), op("x*D + 1"));
    }

    #[test]
    fn product_by_application() {
        let a = op("x*D + 1");
        let b = op("D + 1/x");
        let ab = a.mul(&b);
        assert_eq!(ab.order(), Some(2));
        for s in ["x", "x^2", "x^3", "1/(x + 1)"] {
            let f = rf(s);
            assert_eq!(ab.apply(&f), a.apply(&b.apply(&f)), "{s}");
        }
    }

    #[test]
    fn lf_examples() {
        let one = RatFunc::one();
        assert_eq!(build_lf(&FTuple::new(vec![one.clone(), one.clone()]).unwrap()), op("D^2"));
        let g = rf("x^2 + 1");
        let l = build_lf(&FTuple::new(vec![one.clone(), g.inv()]).unwrap());
        assert_eq!(l, SkewOp::new(vec![RatFunc::zero(), g.inv().derive(), g.inv()]));
        let f = FTuple::new(vec![rf("-1/(x^3 - 2*x^2 + x)"), rf("-(x - 1)^2"), rf("x")]).unwrap();
        assert_eq!(build_lf(&f), op("D^3 + (2/x + 2/(x - 1))*D^2 + (2/(x^2 - x))*D"));
        assert!(matches!(FTuple::new(vec![one, RatFunc::zero()]), Err(Error::ZeroEntry(2))));
    }

    #[test]
    fn monicize_examples() {
        let f = monicize(&[rf("-(x - 1)^2"), rf("x")]).unwrap();
        assert_eq!(f.entries()[0], rf("-1/(x*(x - 1)^2)"));
        assert!(build_lf(&f).is_monic());
        assert_eq!(monicize(&[rf("1")]).unwrap().entries()[0], rf("1"));
        assert_eq!(monicize(&[rf("2"), rf("3")]).unwrap().entries()[0], rf("1/6"));
        assert!(matches!(monicize(&[rf("1"), rf("0")]), Err(Error::ZeroEntry(3))));
    }

    #[test]
    fn shape_examples() {
        let a = shape_matrix(&[rf("(x - 1)^2/(0 - 1)"), rf("x")]).unwrap();
        assert_eq!(a[(0, 1)], rf("1/x"));
        assert_eq!(a[(1, 2)], rf("-1/(x - 1)^2"));
        assert!(a.is_strictly_upper());
        assert_eq!(shape_matrix(&[rf("1")]).unwrap(), MatrixF::unit(2, 0, 1));
        let a = shape_matrix(&[rf("x - 2"), rf("x - 3"), rf("x - 4")]).unwrap();
        let sup: Vec<_> = (0..3).map(|i| a[(i, i + 1)].clone()).collect();
        assert_eq!(sup, vec![rf("1/(x - 4)"), rf("1/(x - 3)"), rf("1/(x - 2)")]);
    }

    #[test]
    fn companion_round_trip() {
        let l = op("D^3 + (2/x + 2/(x - 1))*D^2 + (2/(x^2 - x))*D");
        let c = companion_of(&l).unwrap();
        assert_eq!(c[(2, 0)], rf("0"));
        assert_eq!(c[(2, 1)], rf("-2/(x*(x - 1))"));
        assert_eq!(c[(2, 2)], rf("-2*(1/x + 1/(x - 1))"));
        assert_eq!(operator_of(&c).unwrap(), l);
        assert_eq!(companion_of(&op("D^2")).unwrap(), MatrixF::unit(2, 0, 1));
        assert!(matches!(companion_of(&op("x*D")), Err(Error::NotMonic)));
    }

    #[test]
    fn gauge_examples() {
        let a = MatrixF::from_rows(vec![
            vec![rf("0"), rf("1/x"), rf("1/(x - 1)")],
            vec![rf("0"), rf("0"), rf("0")],
            vec![rf("0"), rf("0"), rf("0")],
        ])
        .unwrap();
        assert_eq!(gauge_transform(&a, &MatrixF::identity(3)).unwrap(), a);
        let b = MatrixF::from_rows(vec![
            vec![rf("1"), rf("0"), rf("0")],
            vec![rf("0"), rf("1/x"), rf("1/(x - 1)")],
            vec![rf("0"), rf("-1/x^2"), rf("-1/(x - 1)^2")],
        ])
        .unwrap();
        let ac = gauge_transform(&a, &b).unwrap();
        assert!(is_companion(&ac));
        assert_eq!(operator_of(&ac).unwrap(), op("D^3 + (2/x + 2/(x - 1))*D^2 + (2/(x^2 - x))*D"));
        let back = gauge_transform(&ac, &b.inverse().unwrap()).unwrap();
        assert_eq!(back, a);
        let singular = MatrixF::zeros(3, 3);
        assert!(matches!(gauge_transform(&a, &singular), Err(Error::SingularGauge)));
    }

    #[test]
    fn display_round_trip() {
        for s in ["D^2", "D^3 + (2/x + 2/(x - 1))*D^2 + (2/(x^2 - x))*D", "x*D + (-1/x)", "(x^2 - 1)*D + 3"] {
            let l = op(s);
            assert_eq!(op(&l.to_string()), l, "{s} -> {l}");
        }
        assert_eq!(op("D^2").to_string(), "D^2");
    }

    #[test]
    fn leibniz_rows() {
        let m = leibniz_matrix(&rf("1/x"), 2);
        assert_eq!(m, MatrixF::from_rows(vec![vec![rf("1/x"), rf("0")], vec![rf("-1/x^2"), rf("1/x")]]).unwrap());
    }
}
