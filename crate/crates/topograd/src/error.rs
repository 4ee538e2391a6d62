use serde::Serialize;
use thiserror::Error;

/// Crate-wide error type. Every variant is machine-readable: the CLI
/// serializes errors as JSON on stderr.
#[derive(Debug, Clone, Error, Serialize, PartialEq, Eq)]
#[serde(tag = "error", content = "detail")]
pub enum Error {
    /// An operation that needs at least one vertex was given an empty graph.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Malformed argument (out-of-range vertex, invalid layout, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Text input could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A strict-mode hypothesis does not hold.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// A complete search found nothing meeting the contract.
    /// `complete` is false when the instance was too large to enumerate.
    #[error("search exhausted (complete={complete}): {context}")]
    SearchExhausted { complete: bool, context: String },

    /// The node budget ran out before the search space was covered.
    #[error("search budget exceeded after {nodes} nodes: {context}")]
    BudgetExceeded { nodes: u64, context: String },

    /// A generator spec that cannot be satisfied (bad parameters or
    /// rejection sampling hit its attempt cap).
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
