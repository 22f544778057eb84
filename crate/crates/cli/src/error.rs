use rocqe_core::Error;

/// Failure of one command, carrying the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input files. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// A class with no segments. Exit code 3.
    #[error("{0}")]
    Degenerate(String),
    /// Flags that cannot be resolved into a configuration. Exit code 4.
    #[error("{0}")]
    Config(String),
    /// Writing a report or plot failed. Exit code 1.
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Config(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::DegenerateClass { .. } => CliError::Degenerate(message),
            Error::InvalidArgument(_) => CliError::Config(message),
            _ => CliError::Input(message),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
