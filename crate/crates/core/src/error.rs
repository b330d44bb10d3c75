use thiserror::Error;

use crate::graph::VertexId;
use crate::label::LabelError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("loop on vertex {0}")]
    Loop(VertexId),
    #[error("duplicate pair {{{0}, {1}}}")]
    DuplicatePair(VertexId, VertexId),
    #[error("map is not injective: {0} has two preimages")]
    NotInjective(VertexId),
    #[error("map assigns two images to {0}")]
    NotFunctional(VertexId),
    #[error("map is not a bijection of the vertex set")]
    NotBijective,
    #[error("automorphism check needs the same graph on both sides")]
    DifferentGraphs,
    #[error("not a partial automorphism: {0}")]
    NotPartialAutomorphism(String),
    #[error("not a partial isometry of the embedded copy: {0}")]
    NotPartialIsometry(String),
    #[error("not a metric space: {0}")]
    NotMetric(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{stage}: size {required} exceeds the vertex cap {cap}")]
    CapExceeded {
        stage: String,
        required: String,
        cap: usize,
    },
    #[error("{stage}: {required} edges exceed the edge cap {cap}")]
    EdgeCapExceeded {
        stage: String,
        required: String,
        cap: usize,
    },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
