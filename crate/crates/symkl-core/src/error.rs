use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("missing Kloosterman table for level {0}")]
    MissingTable(u32),
    #[error("non-rational value where an integer was required: {0}")]
    NonRational(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable kind tag used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::MissingTable(_) => "missing_table",
            Error::NonRational(_) => "non_rational",
            Error::InexactDivision(_) => "inexact_division",
            Error::ReconstructionFailed(_) => "reconstruction_failed",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
            Error::Internal(_) => "internal",
        }
    }
}
