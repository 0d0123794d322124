use thiserror::Error;

/// Failure modes of the algebraic procedures.
///
/// Semantic negatives (a verdict of "not integrable", a failed identity
/// check) are ordinary return values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial has no squarefree decomposition")]
    ZeroPolynomial,
    #[error("entry {0} of the tuple is zero")]
    ZeroEntry(usize),
    #[error("operator is not monic")]
    NotMonic,
    #[error("gauge matrix is singular")]
    SingularGauge,
    #[error("matrix is not strictly upper triangular")]
    NotNilpotent,
    #[error("step budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("solutions are linearly dependent (recursion denominator vanished at step {0})")]
    DependentSolutions(usize),
    #[error("no cyclic vector among the first {0} candidates")]
    NoCyclicVectorFound(usize),
    #[error("recursion denominator vanished while computing G_{0}")]
    DegenerateRecursion(usize),
    #[error("a coordinate variable survives reduction: {0}")]
    NotReducedToBase(String),
    #[error("denominator reduces to zero modulo the ideal")]
    ZeroDenominator,
    #[error("element is not a polynomial in {0}")]
    NotPolynomialIn(String),
    #[error("expressions live in unrelated towers")]
    TowerMismatch,
    #[error("invalid tower: {0}")]
    BadTower(String),
    #[error("invalid group specification: {0}")]
    BadSpec(String),
    #[error("inconsistent group specification: {0}")]
    InconsistentSpec(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("not supported: {0}")]
    NotSupported(String),
}
