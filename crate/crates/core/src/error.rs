use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={limit}")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("majorana pair indices must differ (got {index} twice)")]
    DegeneratePair { index: usize },

    #[error("expected distinct indices, got a repeat of {index}")]
    RepeatedIndex { index: usize },

    #[error("empty occupation list")]
    EmptyOccupation,

    #[error("occupation numbers must be 0 or 1 (got {value})")]
    BadOccupation { value: u8 },

    #[error("matrix is not antisymmetric (max |M + M^T| = {deviation:.3e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("matrix dimension {dim} is odd; pfaffian needs an even dimension")]
    OddDimension { dim: usize },

    #[error("matrix is not orthogonal (max |R^T R - I| = {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("covariance entry {value:.12e} exceeds 1 beyond round-off")]
    CovarianceOutOfRange { value: f64 },

    #[error("forced measurement outcome has probability {probability:.3e}")]
    ImpossibleOutcome { probability: f64 },

    #[error("operator is not Hermitian; expectation would be complex")]
    NonHermitianOperator,

    #[error("probability {value} outside [0, 1]")]
    BadProbability { value: f64 },

    #[error("invalid accuracy parameters: epsilon {epsilon}, delta {delta}")]
    BadAccuracy { epsilon: f64, delta: f64 },

    #[error("target channel is outside the basis span (residual {residual:.3e})")]
    InfeasibleTarget { residual: f64 },

    #[error("linear program did not converge within {iterations} iterations")]
    SolverStalled { iterations: usize },

    #[error("invalid circuit: {0}")]
    BadCircuit(String),

    #[error("invalid amplitude set: {0}")]
    BadAmplitudes(String),

    #[error("invalid pauli word: {0}")]
    BadPauliWord(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
