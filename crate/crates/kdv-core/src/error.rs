//! Error type shared by the spectral core, the solver and the operator layer.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KdvError {
    /// Two fields that must share a truncation size do not.
    #[error("truncation mismatch: expected max_freq {expected}, got {got}")]
    TruncationMismatch { expected: usize, got: usize },

    /// An operation required a mean-zero field.
    #[error("{op} requires a mean-zero field (a_0 = {a0})")]
    MeanZeroRequired { op: &'static str, a0: f64 },

    /// A configuration value violates a documented constraint.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The time step violates the nonlinear CFL restriction.
    #[error("CFL violation: dt = {dt:.3e} exceeds limit {limit:.3e} (c_cfl = {c_cfl}, max_freq = {max_freq}, amplitude estimate = {amplitude:.3e})")]
    Cfl {
        dt: f64,
        limit: f64,
        c_cfl: f64,
        max_freq: usize,
        amplitude: f64,
    },

    /// Integer arithmetic overflowed even in the wide (i128) path.
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    /// A trajectory or decomposition failed a consistency check.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    /// Serialization failure.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, KdvError>;
