use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not active")]
    InactiveVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("total weight overflows 64 bits")]
    WeightOverflow,
    #[error("vertex id space exhausted")]
    TooManyVertices,
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid reducer configuration: {0}")]
    Config(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("kernel solution is not an independent set of the kernel")]
    KernelNotIndependent,
    #[error("lifted set is not independent in the original graph (conflict {0}-{1})")]
    NotIndependent(VertexId, VertexId),
    #[error("lifted set contains vertex {0} that is not in the original graph")]
    UnknownVertex(VertexId),
    #[error("lifted weight {actual} is below kernel weight + offset = {expected}")]
    WeightMismatch { expected: u64, actual: u64 },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("graph has {0} vertices, above the brute-force bound of {1}")]
    TooLarge(usize, usize),
    #[error("independent set enumeration exceeded the cap of {0} sets")]
    Aborted(usize),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FormatError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Parse { line, msg: msg.into() }
    }
}
