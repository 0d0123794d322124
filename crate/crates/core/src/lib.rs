//! Exact differential algebra over `Q(x)`.
//!
//! The crate builds and checks linear differential equations whose
//! differential Galois group is unipotent:
//!
//! * [`ratfield`]: the base field `Q(x)`, Hermite reduction, rational log parts.
//! * [`mpoly`]: multivariate polynomials, Buchberger, elimination, derivations on `F[Z]`.
//! * [`diffop`]: the skew ring `F[D]`, operators `f1 D f2 D ... fl D`, gauge transforms.
//! * [`tower`]: differential towers of log/exp/radical/formal-integral generators.
//! * [`inverse`]: from a unipotent group to a scalar equation with that group.
//! * [`integrab`]: n- and infinity-integrability decisions and witnesses.
//!
//! All algebra is generic over the coefficient field ([`Field`]); the aliases
//! below name the instances the rest of the crate works with.

pub mod diffop;
mod error;
pub mod field;
pub mod integrab;
pub mod inverse;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod ratfield;
pub mod tower;

pub use error::Error;
pub use field::{DifferentialField, Field, Ring};

/// The constant field.
pub type Rational = num_rational::BigRational;

pub use ratfield::{RatFunc, UPoly};

/// Polynomials in the coordinates `Z_{i,j}` (or parameters) over the constants.
pub type MPolyQ = mpoly::MPoly<Rational>;
/// Polynomials over the base field, i.e. elements of `R = F[Z_{i,j}]`.
pub type MPolyF = mpoly::MPoly<RatFunc>;
/// Fractions of [`MPolyF`].
pub type MRatF = mpoly::MRat<RatFunc>;
/// Differential operators with coefficients in `F`.
pub type Operator = diffop::SkewOp<RatFunc>;
/// Matrices over `F`.
pub type MatrixF = matrix::Matrix<RatFunc>;
/// Matrices over the constants.
pub type MatrixQ = matrix::Matrix<Rational>;
