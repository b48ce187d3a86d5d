use std::io;

use thiserror::Error;

/// Exit status for a completed run whose checks did not all pass.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for bad arguments or inputs outside a function's domain.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(refined_core::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("encoding json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<refined_core::Error> for CliError {
    fn from(e: refined_core::Error) -> Self {
        use refined_core::Error as E;
        match e {
            E::StabilizationExhausted { .. } | E::NotPolynomial { .. } | E::Decode(_) => CliError::Compute(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
