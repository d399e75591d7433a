use thiserror::Error;

/// Errors produced by state validation and the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max entry deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("trace must be 1, got {0:.12}")]
    BadTrace(f64),

    #[error("state vector must have unit norm, got {0:.12}")]
    NotNormalized(f64),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("not a projector: {0}")]
    NotProjector(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("event has zero probability ({0:.3e})")]
    ZeroProbability(f64),

    #[error("probe family is linearly dependent (Gram singularity measure {0:.3e})")]
    SingularGram(f64),

    #[error("operator is not unitary (||U^dag U - I|| = {0:.3e})")]
    NotUnitary(f64),

    #[error("basis is incompatible with the reduced state: {0}")]
    IncompatibleBasis(String),

    #[error("not a projective decomposition of the identity: {0}")]
    NotProjectiveDecomposition(String),

    #[error("unknown fixture `{name}` (available: {available})")]
    UnknownFixture { name: String, available: String },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
