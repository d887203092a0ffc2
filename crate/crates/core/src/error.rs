use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix entry ({row}, {col}) = {value} is negative")]
    Negative { row: usize, col: usize, value: f64 },

    #[error("numeric overflow")]
    NumericOverflow,

    #[error("nilpotent matrix cannot be normalized")]
    Nilpotent,

    #[error("eigenvalue iteration did not converge after {iterations} sweeps ({} eigenvalues found)", partial.len())]
    NoConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("construction rules collide at entry ({row}, {col})")]
    ConstructionCollision { row: usize, col: usize },

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("{attempts} consecutive nilpotent draws; density too low")]
    DensityTooLow { attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of numerical machinery rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericOverflow
                | Error::Nilpotent
                | Error::NoConvergence { .. }
                | Error::Verification(_)
                | Error::DensityTooLow { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
