use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("validation failed at {0}")]
    ValidationFailed(String),
}

impl CliError {
    /// 0 success, 1 validation failure, 2 usage error, 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::ValidationFailed(_) => 1,
        }
    }
}

impl From<hubbard_pair::Error> for CliError {
    fn from(e: hubbard_pair::Error) -> Self {
        match e {
            hubbard_pair::Error::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
