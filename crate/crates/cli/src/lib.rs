//! Library half of the `sympmaj` command-line tool: the analysis report and
//! the seeded verification suites.

pub mod report;
pub mod suites;

use thiserror::Error;

/// Failures of a CLI invocation, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("input is not symmetric positive definite: {0}")]
    NotSpd(sympmaj::Error),
    #[error("numerical failure: {0}")]
    Numerical(sympmaj::Error),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Input(_) => 2,
            CliError::NotSpd(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<sympmaj::Error> for CliError {
    fn from(e: sympmaj::Error) -> Self {
        use sympmaj::Error as E;
        match e {
            E::NotSymmetric { .. } | E::NotPositiveDefinite { .. } => CliError::NotSpd(e),
            E::Parse(_)
            | E::NotSquare { .. }
            | E::OddDimension(_)
            | E::Empty
            | E::NonFinite { .. }
            | E::DimensionMismatch { .. }
            | E::LengthMismatch(..)
            | E::InvalidPartition { .. }
            | E::InvalidConfig(_) => CliError::Input(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}
