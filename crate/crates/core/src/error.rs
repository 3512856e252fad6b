use thiserror::Error;

/// Errors raised by construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("solver did not converge: {0}")]
    Solver(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("numeric extraction failed: {0}")]
    Numeric(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
