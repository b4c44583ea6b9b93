//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// Errors are split into two broad categories that map onto distinct CLI
/// exit codes: problems with the *data* handed to an operation
/// ([`Error::Data`], exit code 2) and problems with the *configuration or
/// parameters* of an operation ([`Error::Config`], exit code 3).
#[derive(Debug, Error)]
pub enum Error {
    /// The observed data violates a precondition (non-monotone times,
    /// mismatched lengths, non-equidistant input where required, ...).
    #[error("data error: {0}")]
    Data(String),

    /// A parameter or configuration value is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A matrix expected to be positive semidefinite is not, beyond the
    /// eigenvalue clipping tolerance.
    #[error("matrix is not positive semidefinite: most negative eigenvalue {min_eig} (max eigenvalue {max_eig})")]
    NotPositiveSemidefinite { min_eig: f64, max_eig: f64 },

    /// A matrix expected to be symmetric is not within the relative tolerance.
    #[error("matrix is not symmetric: max asymmetry {max_asym} exceeds {tol}")]
    NotSymmetric { max_asym: f64, tol: f64 },

    /// Matrix or vector dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for data errors, 3 for
    /// configuration/parameter errors (including numerical rejections).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Data(_) | Error::Csv(_) => 2,
            Error::Config(_)
            | Error::NotPositiveSemidefinite { .. }
            | Error::NotSymmetric { .. }
            | Error::Dimension { .. }
            | Error::Json(_) => 3,
            Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
