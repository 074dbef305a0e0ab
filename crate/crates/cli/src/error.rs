use std::path::Path;

use thiserror::Error;

/// Failures mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) | CliError::Config(_) | CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<owl_core::Error> for CliError {
    fn from(e: owl_core::Error) -> Self {
        match e {
            owl_core::Error::ConfigInvalid { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
