use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),
    #[error("domain mismatch between piecewise-linear operands")]
    DomainMismatch,
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("interval [{lo}, {hi}] is not contained in the function domain")]
    OutsideDomain { lo: String, hi: String },
    #[error("graph contains a directed cycle through vertex {0}")]
    Cycle(usize),
    #[error("sink {sink} is not reachable from source {start}")]
    Unreachable { start: usize, sink: usize },
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("path enumeration exceeded limit of {0} paths")]
    LimitExceeded(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gadget constant K = {k} violates K >= n^2 (1 + 2 max|J|) = {required}")]
    GadgetConstantTooSmall { k: String, required: String },
    #[error("edge {edge} has negative weight {weight} at lambda = {lambda}")]
    NegativeWeight {
        edge: usize,
        weight: String,
        lambda: String,
    },
    #[error("no perfect matching exists")]
    NoPerfectMatching,
    #[error("malformed matching chain: {0}")]
    MalformedChain(String),
    #[error("point is not a vertex of the hull")]
    NotAVertex,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
