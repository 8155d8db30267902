//! Crate-wide error type.
//!
//! The variants map onto the tool's exit-code contract: usage, domain,
//! spec-validity and oracle-support problems are "caller" errors (exit 2),
//! while [`Error::Cap`] marks a resource cap being hit (exit 3).

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on the inputs was violated (bad key, mismatched
    /// backends, non-monic polynomial, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// The argument lies outside the mathematical domain of the operation
    /// (e.g. evaluating a zeta product at sigma <= 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured enumeration or truncation cap was exceeded.
    #[error("cap exceeded: {0}")]
    Cap(String),

    /// A curve-counts specification failed validation.
    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    /// The brute-force quotient-ring oracle does not cover this divisor.
    #[error("oracle unsupported: {0}")]
    UnsupportedOracle(String),

    /// A closed-form zeta evaluation hit a pole.
    #[error("pole: {0}")]
    Pole(String),
}

impl Error {
    /// Exit code the CLI maps this error onto (2 usage/domain, 3 caps).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Cap(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
