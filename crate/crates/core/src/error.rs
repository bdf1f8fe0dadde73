use thiserror::Error;

/// Errors produced by the zero-forcing toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// A non-monotone operator appeared where only AND/OR are allowed.
    #[error("monotone violation at line {line}, column {column}: {operator} is not allowed in monotone mode")]
    MonotoneViolation {
        operator: String,
        line: usize,
        column: usize,
    },

    #[error("non-monotone gate kind `{0}`")]
    NonMonotoneGate(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("missing value for variable `{0}`")]
    MissingVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("{what} limit exceeded: {found} > {limit}")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
