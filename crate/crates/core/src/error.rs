use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid {what} {value} on edge {tail}->{head}")]
    InvalidNumber {
        what: &'static str,
        value: f64,
        tail: usize,
        head: usize,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("relation is not transitive: ({0},{1}) and ({1},{2}) present but ({0},{2}) missing")]
    NotTransitive(usize, usize, usize),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("embedding scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("non-finite coordinate for vertex {0}")]
    NonFiniteCoordinate(usize),
}
