//! CLI error type carrying the process exit code.

use std::fmt;

/// Process exit codes: input/config problems exit 2, estimator-domain
/// violations exit 3.
pub type ExitCode = i32;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparseable or invalid input/configuration (exit 2).
    Input(String),
    /// A requested estimator is undefined for the given data (exit 3).
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        CliError::Domain(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Domain(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<georel_core::Error> for CliError {
    fn from(err: georel_core::Error) -> Self {
        match &err {
            georel_core::Error::EstimatorDomain(_) => CliError::Domain(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
