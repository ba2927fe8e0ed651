//! Exact rational linear algebra and strict-inequality feasibility.

mod lp;
mod matrix;
mod rational;
mod relint;

use thiserror::Error;

pub(crate) use lp::minimize_nonnegative;
pub use lp::{strict_feasible, FeasibilityResult, StrictLinearSystem, Verdict};
pub use matrix::{
    affine_dimension, integer_det, kernel_basis, kernel_with_ones, same_column_span, QMatrix,
};
pub use rational::{
    common_denominator, dot, format_rational, parse_rational, primitive_integer_scaling, q, qf, recip,
    qvec, QVector, Rational,
};
pub use relint::{relint_contains, relint_intersection, verify_barycentric, RelintResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("point family {0} is empty")]
    EmptyFamily(usize),
    #[error("auxiliary slack is unbounded")]
    UnboundedAuxiliary,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
