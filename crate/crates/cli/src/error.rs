use bap::BapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation: unknown names, malformed config, invalid parameters.
    #[error("{0}")]
    Usage(String),

    /// Unreadable or inconsistent input data.
    #[error("{0}")]
    Data(String),

    /// A recomputed value disagrees with the claimed one.
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Mismatch(_) => 3,
        }
    }

    pub(crate) fn data(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        Self::Data(format!("{context}: {err}"))
    }
}

impl From<BapError> for CliError {
    fn from(err: BapError) -> Self {
        match err {
            BapError::InvalidArgument(_) => Self::Usage(err.to_string()),
            _ => Self::Data(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::Data(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        Self::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
