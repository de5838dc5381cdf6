use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    pub fn parse(e: impl ToString) -> Self {
        CliError::Parse(e.to_string())
    }

    pub fn invalid(e: impl ToString) -> Self {
        CliError::Invalid(e.to_string())
    }

    /// 1 for a failed verification, 2 for bad input, 3 for I/O.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::VerificationFailed => 1,
            CliError::Parse(_) | CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        })
    }
}
