use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain cap exceeded: {points} points > cap {cap}")]
    DomainCap { points: usize, cap: usize },

    #[error("pivot limit {0} exceeded")]
    PivotLimit(u64),

    #[error("unknown function family: {0}")]
    UnknownFamily(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("surrogate precision insufficient: {0}")]
    Precision(String),

    #[error("certificate failed verification: {0}")]
    VerificationFailed(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DomainCap { .. } | Error::PivotLimit(_) => 3,
            Error::VerificationFailed(_) => 1,
            Error::UnknownFamily(_) | Error::Parse(_) => 2,
            _ => 1,
        }
    }
}
