use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    Dimension {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("graph is acyclic; its cycle code has dimension 0")]
    Acyclic,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} exceeds limit ({value} > {limit}); {hint}")]
    Limit {
        what: &'static str,
        value: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("invalid terminal set: {0}")]
    Terminals(String),

    #[error("insufficient capacity: need {required} cover bits, have {available}")]
    Capacity { required: usize, available: usize },

    #[error("corrupt frame: {0}")]
    CorruptFrame(String),

    #[error("image format error: {0}")]
    Format(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
