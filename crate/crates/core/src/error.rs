use thiserror::Error;

/// Errors raised by the library.
///
/// `IdentityViolation` never signals bad input: it means two independent
/// computations of the same quantity disagreed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("identity violated ({identity}): {detail}")]
    IdentityViolation { identity: String, detail: String },
    #[error("invalid chain complex at degree {degree}: {reason}")]
    InvalidComplex { degree: usize, reason: String },
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("incompatible action: {0}")]
    IncompatibleAction(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degenerate level {level}: {reason}")]
    DegenerateLevel { level: u64, reason: String },
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn identity(identity: &str, detail: impl Into<String>) -> Self {
        Error::IdentityViolation {
            identity: identity.to_string(),
            detail: detail.into(),
        }
    }
}
