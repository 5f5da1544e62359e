use thiserror::Error;

/// Errors produced by the solver toolkit.
#[derive(Debug, Error)]
pub enum BapError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The instance magnitude `Σ|q| + Σ|c| + Σ|d|` does not fit a signed 64-bit integer.
    #[error("cost magnitude does not fit signed 64-bit arithmetic")]
    Overflow,

    /// Delta caches were used against a solution they were not built for.
    #[error("stale delta caches: built for stamp {cache}, solution is at stamp {solution}")]
    StaleCache { cache: u64, solution: u64 },

    #[error("instance too large for enumeration: {candidates} candidate pairs exceed the limit of {limit}")]
    Capacity { candidates: u128, limit: u128 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BapError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(BapError::InvalidArgument(msg.into()))
}
