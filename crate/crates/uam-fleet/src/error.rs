//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A CSV row could not be parsed. Carries the 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input data violates a documented precondition or invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Bad configuration (CLI flags, config file, generator parameters).
    #[error("config error: {0}")]
    Config(String),

    /// The solver backend failed or reported an unusable status.
    #[error("solver error: {0}")]
    Solver(String),

    /// An instance is too large for the exhaustive oracle.
    #[error("instance too large for brute force: {0}")]
    InstanceTooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
