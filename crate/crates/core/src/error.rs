use thiserror::Error;

/// Errors raised by construction and contract checks.
#[derive(Debug, Error)]
pub enum Error {
    /// Structural mismatch between operands (dimensions, bases, windows).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A numerical contract (positivity, completeness, normalization) failed.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A site label does not belong to the window.
    #[error("site {site} outside window [-{half_width}, {half_width}]")]
    SiteOutsideWindow { site: i64, half_width: i64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input (matrix files, state or kernel specs).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
