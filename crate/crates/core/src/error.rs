use thiserror::Error;

/// Errors reported by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("argument error: {0}")]
    Argument(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A computation would exceed the configured size limits.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An operation was called in a state where it is undefined.
    #[error("state error: {0}")]
    State(String),
    /// An internal consistency check failed.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// Missing or inconsistent elimination data.
    #[error("provider error: {0}")]
    Provider(String),
}

pub type Result<T> = std::result::Result<T, Error>;
