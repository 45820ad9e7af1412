use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inconsistent or malformed input (non-bijective generator, subgroup not normal, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A configured size cap was exceeded.
    #[error("resource cap exceeded: {what} has size {size}, cap is {cap}")]
    Resource { what: String, size: usize, cap: usize },

    /// A computed idempotent transport contradicts the expected shape for its operation.
    #[error("shape violation on {group} under {kind}: coefficients {coefficients}")]
    ShapeViolation {
        group: String,
        kind: String,
        coefficients: String,
    },

    /// An exact identity that must hold did not.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
