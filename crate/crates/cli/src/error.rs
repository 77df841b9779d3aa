use std::fmt::Display;

/// A failure with its exit status: 1 usage, 2 input, 3 internal.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn usage(message: impl Display) -> Self {
        CliError::Usage(message.to_string())
    }

    pub fn input(message: impl Display) -> Self {
        CliError::Input(message.to_string())
    }

    pub fn internal(message: impl Display) -> Self {
        CliError::Internal(message.to_string())
    }
}
