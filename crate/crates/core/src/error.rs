//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by the exact and floating layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two exact values from different quadratic contexts were combined.
    #[error("quadratic context mismatch: sqrt({left}) vs sqrt({right})")]
    ContextMismatch { left: String, right: String },

    /// Exact division by zero.
    #[error("division by zero in exact arithmetic")]
    DivisionByZero,

    /// An argument was outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix dimension or bandwidth constraint was violated.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A request exceeded the conditioning budget of the construction.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// An iteration failed to converge; carries the last residual.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
