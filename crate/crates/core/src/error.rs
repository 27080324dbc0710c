use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) has non-finite weight {weight}")]
    NonFiniteWeight { u: usize, v: usize, weight: f64 },

    #[error("edge ({u}, {v}) has negative weight {weight} but the graph is not signed")]
    NegativeWeight { u: usize, v: usize, weight: f64 },

    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("cannot infer node count from an empty edge list")]
    EmptyEdgeList,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rule is incompatible with graph: {0}")]
    RuleGraphMismatch(String),

    #[error("labeling covers {got} nodes, expected {expected}")]
    NodeSetMismatch { expected: usize, got: usize },

    #[error("empty candidate label set")]
    EmptyCandidates,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown node '{0}'")]
    UnknownNode(String),

    #[error("node '{node}' has no {what}")]
    MissingNode { node: String, what: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
