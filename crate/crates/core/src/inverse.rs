//! From a unipotent group `U ⊂ U(n)` to a matrix equation `Y' = AY` of
//! superdiagonal shape and the monic operator `L_f`.
//!
//! The route: `A_u = sum a_i X_i`, a cyclic vector `B` gauging `A_u` to a
//! companion matrix, the generic point `Z` of `U` with `Z' = A_u Z`, the
//! first row `w` of `B0 B Z`, the recursion for `G_n, ..., G_2` in
//! `Frac(F[Z])`, and finally normal forms modulo the extended ideal.

use num_traits::{One, Zero};

use crate::diffop::{
    build_lf, gauge_transform, is_companion, leibniz_matrix, monicize, operator_of, shape_matrix, FTuple,
    SkewOp,
};
use crate::field::{DifferentialField, Field};
use crate::matrix::Matrix;
use crate::mpoly::{
    buchberger, coordinate_index, eliminate, nilpotent_exp, upper_positions, Derivation, GroebnerBasis, MPoly,
    MRat, Monomial, MonomialOrder, VarSet, DEFAULT_BUDGET,
};
use crate::ratfield::{hermite_reduce, RatFunc, UPoly};
use crate::tower::{fundamental_t, TowerExpr};
use crate::{Error, MPolyF, MPolyQ, MRatF, MatrixF, MatrixQ, Rational};

/// Step limits for the searches that could otherwise run long.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub groebner: u64,
    pub cyclic_search: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { groebner: DEFAULT_BUDGET, cyclic_search: 200 }
    }
}

/// A unipotent group given by its defining ideal in `Q[Z_i_j]`, a basis of
/// its Lie algebra whose first `l` elements span a complement of the derived
/// algebra, and optionally the coefficients `a_1, ..., a_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub n: usize,
    pub ideal_gens: Vec<MPolyQ>,
    pub lie_basis: Vec<MatrixQ>,
    pub l: usize,
    pub a_choices: Option<Vec<RatFunc>>,
}

impl GroupSpec {
    /// The full group `U(n)`: basis `E_{i,i+1}` first, then the remaining
    /// `E_{i,j}` row by row.
    pub fn full(n: usize) -> GroupSpec {
        let mut basis: Vec<MatrixQ> = (0..n.saturating_sub(1)).map(|i| Matrix::unit(n, i, i + 1)).collect();
        basis.extend(upper_positions(n).filter(|(i, j)| j - i > 1).map(|(i, j)| Matrix::unit(n, i, j)));
        GroupSpec { n, ideal_gens: Vec::new(), lie_basis: basis, l: n.saturating_sub(1), a_choices: None }
    }

    /// Fills in whichever of the ideal and the Lie basis is missing, checks
    /// the two against each other when both are given, and defaults `l` to
    /// the codimension of the derived algebra.
    ///
    /// With neither given the group is `U(n)`.
    pub fn resolve(
        n: usize,
        ideal: Option<Vec<MPolyQ>>,
        lie: Option<Vec<MatrixQ>>,
        l: Option<usize>,
        a_choices: Option<Vec<RatFunc>>,
        budgets: &Budgets,
    ) -> Result<GroupSpec, Error> {
        if n < 2 {
            return Err(Error::BadSpec(format!("n = {n}, need n >= 2")));
        }
        let (ideal_gens, lie_basis) = match (ideal, lie) {
            (None, None) => {
                let full = GroupSpec::full(n);
                (full.ideal_gens, full.lie_basis)
            }
            (Some(gens), None) => {
                let basis = lie_from_ideal(&gens, n)?;
                (gens, basis)
            }
            (None, Some(basis)) => {
                check_lie_basis(&basis, n)?;
                (ideal_from_lie(&basis, n, budgets.groebner)?, basis)
            }
            (Some(gens), Some(basis)) => {
                check_lie_basis(&basis, n)?;
                let ours = buchberger(&gens, MonomialOrder::DegRevLex, budgets.groebner)?;
                let theirs = buchberger(&ideal_from_lie(&basis, n, budgets.groebner)?, MonomialOrder::DegRevLex, budgets.groebner)?;
                if ours != theirs {
                    return Err(Error::InconsistentSpec("the ideal is not the ideal of exp of the Lie basis".into()));
                }
                let tangent = lie_from_ideal(&gens, n)?;
                if !same_span(&tangent, &basis) {
                    return Err(Error::InconsistentSpec("the Lie basis does not span the tangent space of the ideal".into()));
                }
                (gens, basis)
            }
        };
        let l = match l {
            Some(l) => l,
            None => lie_basis.len() - commutator_span(&lie_basis).len(),
        };
        let spec = GroupSpec { n, ideal_gens, lie_basis, l, a_choices };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the invariants that do not need a Gröbner basis: shapes,
    /// independence, closure under brackets, the prefix condition on `l`,
    /// and independence of the `a_i` modulo derivatives.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.n;
        if n < 2 {
            return Err(Error::BadSpec(format!("n = {n}, need n >= 2")));
        }
        check_lie_basis(&self.lie_basis, n)?;
        let m = self.lie_basis.len();
        if self.l == 0 || self.l > m {
            return Err(Error::BadSpec(format!("l = {} outside 1..={m}", self.l)));
        }
        check_prefix(&self.lie_basis, self.l)?;
        let nvars = n * (n - 1) / 2;
        if let Some(g) = self.ideal_gens.iter().find(|g| g.max_var().is_some_and(|v| v >= nvars)) {
            return Err(Error::BadSpec(format!("generator {g} uses a variable outside Z_i_j")));
        }
        if let Some(a) = &self.a_choices {
            check_a_choices(a, self.l)?;
        }
        Ok(())
    }

    /// `a_choices`, or [`default_a_choices`] when absent.
    pub fn a(&self) -> Vec<RatFunc> {
        self.a_choices.clone().unwrap_or_else(|| default_a_choices(self.l))
    }
}

/// `1/(x-1), ..., 1/(x-l)`: simple poles at distinct points, so no nonzero
/// combination is a derivative.
pub fn default_a_choices(l: usize) -> Vec<RatFunc> {
    (1..=l as i64).map(|c| RatFunc::x_minus(Rational::from_integer(c.into())).inv()).collect()
}

fn upper_vec(m: &MatrixQ) -> Vec<Rational> {
    upper_positions(m.rows()).map(|(i, j)| m[(i, j)].clone()).collect()
}

fn from_upper(n: usize, v: &[Rational]) -> MatrixQ {
    let mut m = Matrix::zeros(n, n);
    for ((i, j), c) in upper_positions(n).zip(v) {
        m[(i, j)] = c.clone();
    }
    m
}

fn rank_of(ms: &[&MatrixQ]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    Matrix::from_rows(ms.iter().map(|m| upper_vec(m)).collect()).expect("equal lengths").rank()
}

fn same_span(a: &[MatrixQ], b: &[MatrixQ]) -> bool {
    let all: Vec<&MatrixQ> = a.iter().chain(b).collect();
    let r = rank_of(&all);
    r == rank_of(&a.iter().collect::<Vec<_>>()) && r == rank_of(&b.iter().collect::<Vec<_>>())
}

fn bracket(a: &MatrixQ, b: &MatrixQ) -> MatrixQ {
    a.try_mul(b).and_then(|ab| ab.try_sub(&b.try_mul(a)?)).expect("square matrices of one size")
}

/// A basis (in reduced row echelon form) of the span of all `[X_i, X_j]`.
pub fn commutator_span(basis: &[MatrixQ]) -> Vec<MatrixQ> {
    let Some(n) = basis.first().map(Matrix::rows) else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            rows.push(upper_vec(&bracket(a, b)));
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(rows).expect("equal lengths").rref();
    (0..pivots.len()).map(|k| from_upper(n, r.row(k))).collect()
}

fn check_lie_basis(basis: &[MatrixQ], n: usize) -> Result<(), Error> {
    if basis.is_empty() {
        return Err(Error::BadSpec("empty Lie basis".into()));
    }
    for (k, x) in basis.iter().enumerate() {
        if x.rows() != n || x.cols() != n || !x.is_strictly_upper() {
            return Err(Error::BadSpec(format!("basis element {} is not a strictly upper {n}x{n} matrix", k + 1)));
        }
    }
    let refs: Vec<&MatrixQ> = basis.iter().collect();
    if rank_of(&refs) < basis.len() {
        return Err(Error::BadSpec("Lie basis is linearly dependent".into()));
    }
    let closed = commutator_span(basis).iter().all(|c| {
        let mut with = refs.clone();
        with.push(c);
        rank_of(&with) == basis.len()
    });
    if !closed {
        return Err(Error::BadSpec("the span of the basis is not closed under brackets".into()));
    }
    Ok(())
}

/// `X_1, ..., X_l` must map to a basis of `u/[u,u]`.
fn check_prefix(basis: &[MatrixQ], l: usize) -> Result<(), Error> {
    let derived = commutator_span(basis);
    let m = basis.len();
    let mut with: Vec<&MatrixQ> = basis[..l].iter().collect();
    with.extend(&derived);
    if derived.len() + l != m || rank_of(&with) != m {
        return Err(Error::BadSpec(format!(
            "the first {l} basis elements do not span a complement of the derived algebra (dimension {})",
            derived.len()
        )));
    }
    Ok(())
}

fn check_a_choices(a: &[RatFunc], l: usize) -> Result<(), Error> {
    if a.len() != l {
        return Err(Error::BadSpec(format!("{} coefficients given, l = {l}", a.len())));
    }
    if let Some(i) = a.iter().position(Zero::is_zero) {
        return Err(Error::ZeroEntry(i + 1));
    }
    if !independent_mod_derivatives(a) {
        return Err(Error::BadSpec("the coefficients are linearly dependent modulo derivatives".into()));
    }
    Ok(())
}

/// Whether the images of `a` in `F/F'` are linearly independent.
///
/// The Hermite remainder is linear and vanishes exactly on derivatives, so
/// this is the rank of the remainders' numerators over a common denominator.
pub fn independent_mod_derivatives(a: &[RatFunc]) -> bool {
    let rems: Vec<RatFunc> = a.iter().map(|g| hermite_reduce(g).1).collect();
    if rems.iter().any(Zero::is_zero) {
        return false;
    }
    let den = rems.iter().fold(UPoly::one(), |acc, r| {
        let g = acc.gcd(r.den());
        (&acc * r.den()).div_exact(&g).expect("gcd divides")
    });
    let nums: Vec<UPoly> =
        rems.iter().map(|r| r.num() * &den.div_exact(r.den()).expect("divides the lcm")).collect();
    let width = den.deg().max(1);
    let rows = nums.iter().map(|p| (0..width).map(|k| p.coeff(k)).collect()).collect();
    Matrix::from_rows(rows).expect("equal lengths").rank() == a.len()
}

/// Generators of the ideal of `exp(span X)`: eliminate the parameters from
/// `Z_i_j - exp(x1 X1 + ... + xm Xm)_i_j`.
pub fn ideal_from_lie(lie_basis: &[MatrixQ], n: usize, budget: u64) -> Result<Vec<MPolyQ>, Error> {
    check_lie_basis(lie_basis, n)?;
    let m = lie_basis.len();
    let mut x: Matrix<MPolyQ> = Matrix::zeros(n, n);
    for (k, b) in lie_basis.iter().enumerate() {
        let xk = MPoly::var(k);
        x = x.try_add(&b.map(|c| xk.scale(c)))?;
    }
    let e = nilpotent_exp(&x)?;
    let gens: Vec<MPolyQ> =
        upper_positions(n).map(|(i, j)| &MPoly::var(m + coordinate_index(n, i, j)) - &e[(i, j)]).collect();
    Ok(eliminate(&gens, m, budget)?.into_iter().map(|g| g.remap(|v| v - m)).collect())
}

/// The tangent space at the identity of the zero set of `ideal_gens`, as a
/// basis ordered with a complement of the derived algebra first.
pub fn lie_from_ideal(ideal_gens: &[MPolyQ], n: usize) -> Result<Vec<MatrixQ>, Error> {
    let nvars = n * (n - 1) / 2;
    let mut rows = Vec::new();
    for g in ideal_gens {
        if g.max_var().is_some_and(|v| v >= nvars) {
            return Err(Error::BadSpec(format!("generator {g} uses a variable outside Z_i_j")));
        }
        if !g.coeff(&Monomial::one()).is_zero() {
            return Err(Error::BadSpec(format!("generator {g} does not vanish at the identity")));
        }
        rows.push((0..nvars).map(|v| g.coeff(&Monomial::var(v, 1))).collect::<Vec<_>>());
    }
    let tangent: Vec<MatrixQ> = if rows.is_empty() {
        (0..nvars).map(|k| from_upper(n, &unit_vec(nvars, k))).collect()
    } else {
        Matrix::from_rows(rows)?.nullspace().iter().map(|v| from_upper(n, v)).collect()
    };
    if tangent.is_empty() {
        return Err(Error::BadSpec("the ideal defines the trivial group".into()));
    }
    let derived = commutator_span(&tangent);
    let mut ordered: Vec<MatrixQ> = Vec::new();
    for t in &tangent {
        let mut with: Vec<&MatrixQ> = ordered.iter().chain(&derived).collect();
        let before = rank_of(&with);
        with.push(t);
        if rank_of(&with) > before {
            ordered.push(t.clone());
        }
    }
    ordered.extend(derived);
    if ordered.len() != tangent.len() || !same_span(&ordered, &tangent) {
        return Err(Error::BadSpec("the tangent space is not closed under brackets".into()));
    }
    Ok(ordered)
}

fn unit_vec(len: usize, k: usize) -> Vec<Rational> {
    (0..len).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect()
}

/// `A_u = a_1 X_1 + ... + a_l X_l` over `F`.
pub fn build_au(spec: &GroupSpec) -> Result<MatrixF, Error> {
    spec.validate()?;
    let a = spec.a();
    if a.len() != spec.l {
        return Err(Error::BadSpec(format!("{} coefficients given, l = {}", a.len(), spec.l)));
    }
    let mut acc = Matrix::zeros(spec.n, spec.n);
    for (ai, xi) in a.iter().zip(&spec.lie_basis) {
        acc = acc.try_add(&xi.map(|c| ai.clone() * RatFunc::constant(c.clone())))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicVector {
    pub v: Vec<RatFunc>,
    /// Rows `v, δv, ..., δ^{n-1} v` with `δ(row) = row' + row A_u`.
    pub b: MatrixF,
    /// Candidates examined before success.
    pub tried: usize,
}

fn candidates(n: usize) -> impl Iterator<Item = Vec<RatFunc>> {
    let x = RatFunc::x();
    let x2 = x.clone() * x.clone();
    let unit = move |i: usize| -> Vec<RatFunc> {
        (0..n).map(|k| if k == i { RatFunc::one() } else { RatFunc::zero() }).collect()
    };
    let singles = (0..n).map(unit);
    let pairs = (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    let x_ = x.clone();
    let doubles = pairs.clone().map(move |(i, j)| {
        let mut v = unit(i);
        v[j] = x_.clone();
        v
    });
    let triples = pairs.flat_map(move |(i, j)| (0..n).filter(move |&k| k != i && k != j).map(move |k| (i, j, k))).map(
        move |(i, j, k)| {
            let mut v = unit(i);
            v[j] = x.clone();
            v[k] = x2.clone();
            v
        },
    );
    singles.chain(doubles).chain(triples)
}

/// Searches `e_i`, then `e_i + x e_j`, then `e_i + x e_j + x^2 e_k` for a
/// vector whose first `n - 1` derivatives form a basis. Candidates with a
/// zero first coordinate are passed over since the pipeline divides by it.
pub fn cyclic_vector(a_u: &MatrixF, budget: usize) -> Result<CyclicVector, Error> {
    if !a_u.is_square() {
        return Err(Error::Shape("A_u must be square".into()));
    }
    let n = a_u.rows();
    for (tried, v) in candidates(n).take(budget).enumerate() {
        if v[0].is_zero() {
            continue;
        }
        let mut rows = vec![v.clone()];
        for k in 1..n {
            let prev = &rows[k - 1];
            let moved = a_u.vec_mul(prev);
            rows.push(prev.iter().zip(moved).map(|(p, m)| p.derive() + m).collect());
        }
        let b = Matrix::from_rows(rows)?;
        if !b.det().is_zero() {
            return Ok(CyclicVector { v, b, tried: tried + 1 });
        }
    }
    Err(Error::NoCyclicVectorFound(budget))
}

/// `(binom(i-1, j-1) (1/Y1)^{(i-j)})`, which turns the Wronskian of
/// `(Y1, ..., Yn)` into that of `(1, Y2/Y1, ..., Yn/Y1)`.
pub fn b0_matrix(y1: &RatFunc, n: usize) -> Result<MatrixF, Error> {
    if y1.is_zero() {
        return Err(Error::ZeroEntry(1));
    }
    Ok(leibniz_matrix(&y1.inv(), n))
}

/// The generic point: `Z_ii = 1`, `Z_ij` the coordinate variables above the
/// diagonal.
pub fn generic_point(n: usize) -> Matrix<MPolyF> {
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => MPoly::one(),
        std::cmp::Ordering::Less => MPoly::var(coordinate_index(n, i, j)),
        std::cmp::Ordering::Greater => MPoly::zero(),
    })
}

/// The derivation of `F[Z_i_j]` given by `Z' = A_u Z`.
pub fn coordinate_derivation(a_u: &MatrixF) -> Result<Derivation<RatFunc>, Error> {
    let n = a_u.rows();
    let z = generic_point(n);
    let dz = a_u.map(|c| MPoly::constant(c.clone())).try_mul(&z)?;
    Ok(Derivation::polynomial(upper_positions(n).map(|(i, j)| dz[(i, j)].clone()).collect()))
}

/// `G_n, ..., G_2` from `w_2, ..., w_n`:
/// `G_{n-j+2} = 1/(G_{n-j+3}( ... (G_n w_j')' ... )')'`.
pub fn g_recursion(w: &[MRatF], d: &Derivation<RatFunc>) -> Result<Vec<MRatF>, Error> {
    let n = w.len() + 1;
    // g[i] holds G_i
    let mut g: Vec<MRatF> = vec![MRat::zero(); n + 1];
    for j in 2..=n {
        let mut h = d.derive(&w[j - 2]);
        for i in (n - j + 3..=n).rev() {
            h = d.derive(&(&g[i] * &h));
        }
        let target = n - j + 2;
        g[target] = h.recip().map_err(|_| Error::DegenerateRecursion(target))?;
    }
    Ok((2..=n).rev().map(|i| g[i].clone()).collect())
}

/// `φ(N)/φ(D)` for `G = N/D`, with both normal forms required free of `Z`.
pub fn reduce_to_f(g: &MRatF, gb: &GroebnerBasis<RatFunc>) -> Result<RatFunc, Error> {
    let num = gb.normal_form(g.num());
    let den = gb.normal_form(g.den());
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let q = MRat::new(num, den)?;
    match (q.num().constant_value(), q.den().constant_value()) {
        (Some(a), Some(b)) => Ok(a / b),
        _ => Err(Error::NotReducedToBase(q.to_string())),
    }
}

/// The checkable consequences of a successful run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// `B A_u B^{-1} + B' B^{-1}` is a companion matrix.
    pub companion_shape: bool,
    /// Every `f_i` reduced to an element of `F`.
    pub z_free: bool,
    /// `D f2 D ... fn D` kills `w_j` modulo the ideal, for each `j`.
    pub annihilation: Vec<bool>,
    /// `T' = A T` for the fundamental matrix built from nested integrals.
    pub fundamental_matrix: bool,
    /// The derivative of every Gröbner basis element reduces to zero.
    pub differential_ideal: bool,
    /// `Y1 L (1/Y1)` equals the operator of the companion matrix.
    pub operator_match: bool,
}

impl VerificationReport {
    pub fn all_green(&self) -> bool {
        self.companion_shape
            && self.z_free
            && self.annihilation.iter().all(|&b| b)
            && self.fundamental_matrix
            && self.differential_ideal
            && self.operator_match
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineResult {
    pub a_choices: Vec<RatFunc>,
    pub a_u: MatrixF,
    pub cyclic_vector: Vec<RatFunc>,
    pub b: MatrixF,
    pub a_c: MatrixF,
    /// Reduced Gröbner basis of the extended ideal, in the `Z_i_j`.
    pub ideal_basis: Vec<MPolyQ>,
    /// `(B0 B Z)_{1,j}` for `j = 1..n`.
    pub w: Vec<MPolyF>,
    /// `G_n, ..., G_2` before reduction.
    pub g: Vec<MRatF>,
    /// `(f1, ..., fn)` with `f1` making `L_f` monic.
    pub f_tuple: FTuple<RatFunc>,
    pub a: MatrixF,
    pub l: SkewOp<RatFunc>,
    pub certificate: VerificationReport,
}

impl PipelineResult {
    /// `(f2, ..., fn)`.
    pub fn f_partial(&self) -> &[RatFunc] {
        &self.f_tuple.entries()[1..]
    }
}

/// Runs the whole construction and checks its certificate.
pub fn run_pipeline(spec: &GroupSpec, budgets: &Budgets) -> Result<PipelineResult, Error> {
    let n = spec.n;
    let a_u = build_au(spec)?;
    let cv = cyclic_vector(&a_u, budgets.cyclic_search)?;
    let a_c = gauge_transform(&a_u, &cv.b)?;

    let d = coordinate_derivation(&a_u)?;
    let y1 = cv.v[0].clone();
    let b0b = b0_matrix(&y1, n)?.try_mul(&cv.b)?;
    let z = generic_point(n);
    let first_row = Matrix::from_rows(vec![b0b.row(0).iter().map(|c| MPoly::constant(c.clone())).collect()])?;
    let w: Vec<MPolyF> = first_row.try_mul(&z)?.row(0).to_vec();

    let gb_q = buchberger(&spec.ideal_gens, MonomialOrder::DegRevLex, budgets.groebner)?;
    if gb_q.generators().iter().any(MPoly::is_constant) {
        return Err(Error::BadSpec("the ideal is the unit ideal".into()));
    }
    let gb = gb_q.map_coeffs(|c| RatFunc::constant(c.clone()));

    let wr: Vec<MRatF> = w[1..].iter().cloned().map(MRat::from_poly).collect();
    let g = g_recursion(&wr, &d)?;
    // g lists G_n, ..., G_2; f_partial lists f_2, ..., f_n
    let f_partial: Vec<RatFunc> = g.iter().rev().map(|gi| reduce_to_f(gi, &gb)).collect::<Result<_, _>>()?;
    let f_tuple = monicize(&f_partial)?;
    let a = shape_matrix(&f_partial)?;
    let l = build_lf(&f_tuple);

    let certificate = VerificationReport {
        companion_shape: is_companion(&a_c),
        z_free: true,
        annihilation: w.iter().map(|wj| annihilated(wj, &f_partial, &d, &gb)).collect(),
        fundamental_matrix: fundamental_ok(&f_partial, &a)?,
        differential_ideal: gb.generators().iter().all(|p| gb.normal_form(&d.derive_poly(p)).is_zero()),
        operator_match: operator_of(&a_c).is_ok_and(|op| {
            SkewOp::mult(y1.clone()).mul(&l).mul(&SkewOp::mult(y1.inv())) == op
        }),
    };
    Ok(PipelineResult {
        a_choices: spec.a(),
        a_u,
        cyclic_vector: cv.v,
        b: cv.b,
        a_c,
        ideal_basis: gb_q.generators().to_vec(),
        w,
        g,
        f_tuple,
        a,
        l,
        certificate,
    })
}

/// `D f2 D f3 ... fn D w`, reduced modulo the ideal, is zero.
fn annihilated(w: &MPolyF, f_partial: &[RatFunc], d: &Derivation<RatFunc>, gb: &GroebnerBasis<RatFunc>) -> bool {
    let mut h = d.derive_poly(w);
    for fi in f_partial.iter().rev() {
        h = d.derive_poly(&h.scale(fi));
    }
    gb.normal_form(&h).is_zero()
}

fn fundamental_ok(f_partial: &[RatFunc], a: &MatrixF) -> Result<bool, Error> {
    let t = fundamental_t(f_partial)?;
    let at = a.map(|c| TowerExpr::base(c.clone())).try_mul(&t)?;
    Ok(t.derive() == at)
}

/// The coordinates `Z_i_j` of `U(n)`, for parsing and printing ideals.
pub fn coordinates(n: usize) -> VarSet {
    VarSet::coordinates(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::parse_operator;
    use crate::field::rat;
    use crate::ratfield::rf;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn two_parameter_spec() -> GroupSpec {
        let vs = coordinates(3);
        GroupSpec {
            n: 3,
            ideal_gens: vec![vs.parse("Z_2_3").unwrap()],
            lie_basis: vec![Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2)],
            l: 2,
            a_choices: Some(vec![rf("1/x"), rf("1/(x-1)")]),
        }
    }

    #[test]
    fn defaults_have_simple_poles() {
        assert_eq!(default_a_choices(2), vec![rf("1/(x-1)"), rf("1/(x-2)")]);
        assert!(independent_mod_derivatives(&default_a_choices(4)));
        assert!(!independent_mod_derivatives(&[rf("1/x"), rf("2/x + 1/x^2")]));
        assert!(!independent_mod_derivatives(&[rf("1/x^2")]));
        assert!(independent_mod_derivatives(&[rf("1/(x^2+1)"), rf("x/(x^2+1)")]));
    }

    #[test]
    fn au_and_cyclic_vector() {
        let spec = two_parameter_spec();
        let a_u = build_au(&spec).unwrap();
        assert_eq!(a_u.row(0), &[rf("0"), rf("1/x"), rf("1/(x-1)")][..]);
        let cv = cyclic_vector(&a_u, 200).unwrap();
        assert_eq!(cv.v, vec![rf("1"), rf("0"), rf("0")]);
        assert_eq!(cv.b.row(2), &[rf("0"), rf("-1/x^2"), rf("-1/(x-1)^2")][..]);
        assert!(is_companion(&gauge_transform(&a_u, &cv.b).unwrap()));
        // x' = 1 makes e1 + x e2 cyclic even for A_u = 0
        let zero = cyclic_vector(&Matrix::zeros(2, 2), 200).unwrap();
        assert_eq!(zero.v, vec![rf("1"), rf("x")]);
        assert_eq!(cyclic_vector(&Matrix::zeros(2, 2), 1), Err(Error::NoCyclicVectorFound(1)));
    }

    #[test]
    fn b0() {
        assert_eq!(b0_matrix(&rf("1"), 3).unwrap(), Matrix::identity(3));
        let m = b0_matrix(&rf("x"), 2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![rf("1/x"), rf("0")], vec![rf("-1/x^2"), rf("1/x")]]);
        assert_eq!(b0_matrix(&rf("0"), 2), Err(Error::ZeroEntry(1)));
    }

    #[test]
    fn recursion_and_reduction() {
        let spec = two_parameter_spec();
        let a_u = build_au(&spec).unwrap();
        let d = coordinate_derivation(&a_u).unwrap();
        let vs = coordinates(3);
        let p = |s: &str| MRat::from_poly(vs.parse::<RatFunc>(s).unwrap());
        let g = g_recursion(&[p("Z_1_2"), p("Z_1_3")], &d).unwrap();
        assert_eq!(g[0], p("x"));
        let expect = MRat::from_poly(vs.parse::<RatFunc>("Z_2_3 + x/(x-1)").unwrap());
        assert_eq!(g[1], d.derive(&expect).recip().unwrap());
        let gb = buchberger(&spec.ideal_gens, MonomialOrder::DegRevLex, DEFAULT_BUDGET)
            .unwrap()
            .map_coeffs(|c| RatFunc::constant(c.clone()));
        assert_eq!(reduce_to_f(&g[1], &gb).unwrap(), rf("-(x-1)^2"));
        assert_eq!(reduce_to_f(&g[0], &gb).unwrap(), rf("x"));
        assert!(matches!(reduce_to_f(&p("Z_1_2"), &gb), Err(Error::NotReducedToBase(_))));
        let zero_den = MRat::new(vs.parse("1").unwrap(), vs.parse("Z_2_3").unwrap()).unwrap();
        assert_eq!(reduce_to_f(&zero_den, &gb), Err(Error::ZeroDenominator));
    }

    #[test]
    fn two_parameter_pipeline() {
        let r = run_pipeline(&two_parameter_spec(), &Budgets::default()).unwrap();
        assert_eq!(r.f_partial(), &[rf("-(x-1)^2"), rf("x")][..]);
        assert_eq!(r.l, parse_operator("D^3 + 2*(1/x + 1/(x-1))*D^2 + 2/(x*(x-1))*D").unwrap());
        assert_eq!(r.a[(0, 1)], rf("1/x"));
        assert_eq!(r.a[(1, 2)], rf("-1/(x-1)^2"));
        assert!(r.certificate.all_green(), "{:?}", r.certificate);
    }

    #[test]
    fn full_group_pipeline() {
        for n in 2..=4usize {
            let mut spec = GroupSpec::full(n);
            spec.a_choices =
                Some((0..n - 1).map(|k| RatFunc::x_minus(q((n - k) as i64)).inv()).collect());
            let r = run_pipeline(&spec, &Budgets::default()).unwrap();
            let expect: Vec<RatFunc> = (2..=n).map(|i| RatFunc::x_minus(q(i as i64))).collect();
            assert_eq!(r.f_partial(), &expect[..]);
            assert!(r.certificate.all_green());
        }
    }

    #[test]
    fn non_unit_first_coordinate() {
        // e1 is not cyclic here; the search must move on to a vector with v1 != 0
        let spec = GroupSpec {
            n: 3,
            ideal_gens: vec![coordinates(3).parse("Z_1_2").unwrap()],
            lie_basis: vec![Matrix::unit(3, 1, 2), Matrix::unit(3, 0, 2)],
            l: 2,
            a_choices: None,
        };
        let r = run_pipeline(&spec, &Budgets::default()).unwrap();
        assert!(!r.cyclic_vector[0].is_zero());
        assert!(r.certificate.all_green(), "{:?}", r.certificate);
    }

    #[test]
    fn lie_ideal_conversions() {
        let vs = coordinates(3);
        let gens = ideal_from_lie(&[Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2)], 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(gens, vec![vs.parse::<Rational>("Z_2_3").unwrap()]);
        assert!(ideal_from_lie(&GroupSpec::full(3).lie_basis, 3, DEFAULT_BUDGET).unwrap().is_empty());
        let basis = lie_from_ideal(&gens, 3).unwrap();
        assert_eq!(basis, vec![Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2)]);

        let diag = Matrix::unit(3, 0, 1).try_add(&Matrix::unit(3, 1, 2)).unwrap();
        let gens = ideal_from_lie(std::slice::from_ref(&diag), 3, DEFAULT_BUDGET).unwrap();
        let gb = buchberger(&gens, MonomialOrder::DegRevLex, DEFAULT_BUDGET).unwrap();
        assert!(gb.contains(&vs.parse("Z_1_2 - Z_2_3").unwrap()));
        assert!(gb.contains(&vs.parse("Z_1_3 - 1/2*Z_1_2^2").unwrap()));
        assert_eq!(lie_from_ideal(&gens, 3).unwrap(), vec![diag.clone()]);

        let full = lie_from_ideal(&[], 3).unwrap();
        assert_eq!(full, vec![Matrix::unit(3, 0, 1), Matrix::unit(3, 1, 2), Matrix::unit(3, 0, 2)]);
        assert!(lie_from_ideal(&[vs.parse("Z_1_2 + 1").unwrap()], 3).is_err());
    }

    #[test]
    fn spec_checks() {
        let vs = coordinates(3);
        let s = GroupSpec::resolve(3, Some(vec![vs.parse("Z_2_3").unwrap()]), None, None, None, &Budgets::default())
            .unwrap();
        assert_eq!(s.l, 2);
        let bad = GroupSpec::resolve(
            3,
            Some(vec![vs.parse("Z_2_3").unwrap()]),
            Some(vec![Matrix::unit(3, 0, 1)]),
            Some(1),
            None,
            &Budgets::default(),
        );
        assert!(matches!(bad, Err(Error::InconsistentSpec(_))));
        // E12 and E23 do not span a Lie algebra without E13
        let open = GroupSpec::resolve(3, None, Some(vec![Matrix::unit(3, 0, 1), Matrix::unit(3, 1, 2)]), None, None, &Budgets::default());
        assert!(matches!(open, Err(Error::BadSpec(_))));
        let mut full = GroupSpec::full(3);
        full.l = 3;
        assert!(full.validate().is_err());
        full.l = 2;
        full.a_choices = Some(vec![rf("1/x"), rf("3/x")]);
        assert!(full.validate().is_err());
        full.a_choices = Some(vec![rf("1/x"), rf("0")]);
        assert_eq!(full.validate(), Err(Error::ZeroEntry(2)));
        let _ = rat(1, 2);
    }
}
