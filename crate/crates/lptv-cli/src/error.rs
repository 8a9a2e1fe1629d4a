//! Failures and their process exit codes.

use crate::format::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoSolution(String),
    #[error("verification failed: {}", .0.join(", "))]
    Verification(Vec<String>),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Input(_) | CliError::Io(_) => 1,
            CliError::NoSolution(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<lptv::floquet::FloquetError> for CliError {
    fn from(e: lptv::floquet::FloquetError) -> Self {
        match e {
            lptv::floquet::FloquetError::NoSolutionWithinPMax { .. } => CliError::NoSolution(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<lptv::monodromy::MonodromyError> for CliError {
    fn from(e: lptv::monodromy::MonodromyError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<lptv::harmonic::HarmonicError> for CliError {
    fn from(e: lptv::harmonic::HarmonicError) -> Self {
        match e {
            lptv::harmonic::HarmonicError::DimensionMismatch(m) => CliError::Input(format!("dimension mismatch: {m}")),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<lptv::catalog::CatalogError> for CliError {
    fn from(e: lptv::catalog::CatalogError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
