//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by polyexp operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside an operation's domain (weight mismatch, z = 0,
    /// branch-cut input, m > n, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A defining series diverges for the requested index (e.g. ζ with
    /// leading index 1).
    #[error("divergent: {0}")]
    Divergence(String),

    /// The requested tolerance is unreachable in the selected evaluation
    /// regime (e.g. asymptotic series at too small |z|).
    #[error("regime error: {0}")]
    Regime(String),

    /// Adaptive quadrature failed to meet its tolerance.
    #[error("quadrature failure: {msg} (achieved error {achieved:.3e})")]
    Quadrature { msg: String, achieved: f64 },

    /// Malformed textual input (composition or complex number).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
