use thiserror::Error;

/// Errors raised by the numerical and physical layers of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max |A - A^dagger| entry {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not unitary (max |U^dagger U - I| entry {0:e})")]
    NotUnitary(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("not a column-stochastic matrix: {0}")]
    NotStochastic(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("post-processing annihilated every POVM element")]
    DegeneratePovm,

    #[error("coarse outcome {0} carries no weight")]
    ZeroMass(usize),

    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid audit configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
