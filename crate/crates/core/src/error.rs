use thiserror::Error;

use crate::ctengine::AbortedTrace;
use crate::exactla::Int;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("input vectors are linearly dependent")]
    LinearlyDependent,
    #[error("sublattice is not saturated (non-primitive input, index {index})")]
    NonSaturated { index: Int },
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(Int),
    #[error("not pointed")]
    NotPointed,
    #[error("not full-dimensional")]
    NotFullDimensional,
    #[error("non-generic reference")]
    NonGenericReference,
    #[error("reference point is not in the interior of the cone")]
    ReferenceOutsideCone,
    #[error("non-canonical form: denominator vector {0} is not expandable")]
    NonCanonical(String),
    #[error("cone is not normalized into the positive orthant")]
    NotNormalized,
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("zero pivot entry at row {row}, column {col}")]
    ZeroPivot { row: usize, col: usize },
    #[error("invalid carry vector: {0}")]
    InvalidCarry(String),
    #[error("empty constraint system")]
    EmptySystem,
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("elimination trace aborted at step {}: row {} has no negative entry", .0.step + 1, .0.failing_row + 1)]
    TraceAborted(Box<AbortedTrace>),
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value does not fit in a machine integer")]
    Overflow,
    #[error("internal error: {0}")]
    Internal(String),
}
