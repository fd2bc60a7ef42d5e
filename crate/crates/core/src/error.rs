use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph parameters: {0}")]
    Domain(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for graph on {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not circulant (row {0} is not a rotation of row 0)")]
    NotCirculant(usize),

    #[error("negative chip count {value} at vertex {vertex}")]
    NegativeEntry { vertex: usize, value: i64 },

    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(String),

    #[error("configuration is not stable at vertex {0}")]
    Unstable(usize),

    #[error("configurations belong to different sandpiles")]
    Mismatched,

    #[error("inconsistent instance: {0}")]
    Inconsistent(String),

    #[error("structure theorem does not apply: {0}")]
    HypothesisViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
