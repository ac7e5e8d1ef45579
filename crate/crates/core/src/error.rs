use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space dimensions: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error("eigenvector {index} has mixed parity (<Π> = {value:.6})")]
    MixedParity { index: usize, value: f64 },

    #[error("no eigenstate outside the |l> sector was found")]
    NoTildeZero,

    #[error("step size underflow at t = {t:.6} (h = {h:.3e}); the problem may be stiff")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("time grid must be strictly increasing and finite")]
    InvalidTimeGrid,

    #[error("density matrix lost positivity at t = {t:.6}: min eigenvalue {min_eigenvalue:.3e}")]
    PositivityViolation { t: f64, min_eigenvalue: f64 },

    #[error("superoperator of dimension {dim}² exceeds the memory bound {limit}")]
    MemoryBound { dim: usize, limit: usize },

    #[error("the generator carries a time-dependent drive; this path needs a free generator")]
    DriveNotSupported,

    #[error("spectrum window too short: correlation tail {tail:.3e} exceeds 1e-3 of maximum {max:.3e}")]
    WindowTooShort { tail: f64, max: f64 },

    #[error("matrix is singular")]
    Singular,
}
