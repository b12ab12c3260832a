use thiserror::Error;

/// Errors reported by the library. Usage errors (bad dimensions, unknown
/// generators, non-members) are kept distinct from mathematical outcomes
/// such as an inconsistent linear system, which are ordinary return values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("variant mismatch: expected {expected}, got {got}")]
    VariantMismatch { expected: String, got: String },

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("matrix is not a member of {0}")]
    NotInGroup(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid coset representatives: {0}")]
    InvalidCosetReps(String),

    #[error("signed permutation has determinant -1; only the kernel of det is allowed")]
    OddSignedPermutation,

    #[error("transvection indices must be distinct (got i = j = {0})")]
    EqualTransvectionIndices(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
