//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by classification, evaluation, quadrature and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    /// An exponent, weight or dimension fails a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Point/function dimension mismatch.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Evaluation point outside the closed ball, or pole parameter outside the open ball.
    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    /// Weight (1-|z|^2)^alpha is not integrable on the ball.
    #[error("divergent weight: alpha = {alpha} requires alpha > -1")]
    DivergentWeight { alpha: f64 },

    /// A quadrature or Monte Carlo run did not converge within its node budget.
    #[error("quadrature did not converge: {what} (nodes used: {nodes})")]
    NonConvergence { what: String, nodes: usize },

    /// Hardy-norm internal self-check failed: integral means must be nondecreasing.
    #[error("integral means not nondecreasing: {0}")]
    MonotonicityViolation(String),

    /// Requested operation is not supported for the given space/representation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Taylor truncation degree above the configured combinatorial cap.
    #[error("degree {degree} exceeds truncation cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    /// Sweep precondition: the pair is not contained per the classifier.
    #[error("pair is not contained: {0}")]
    NotContained(String),

    /// Sweep precondition: the pair is not a tight fitting.
    #[error("pair is not a tight fitting: {0}")]
    NotTight(String),

    /// Fixture file missing or malformed.
    #[error("fixture error: {0}")]
    Fixture(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
