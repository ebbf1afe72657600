use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: edge weight must be positive and finite, got {weight}")]
    InvalidWeight { line: usize, weight: f64 },

    #[error("graph has no edges after removing self-loops")]
    EmptyGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("{what} needs at least {need} nodes, graph has {got}")]
    TooFewNodes {
        what: &'static str,
        need: usize,
        got: usize,
    },

    #[error("eigensolver did not converge")]
    EigenNoConvergence,

    #[error("katz attenuation {alpha} is not below 1/lambda_1 = {limit}")]
    DivergentKatz { alpha: f64, limit: f64 },

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("matrix exponential overflows (leading eigenvalue {0})")]
    ExponentialOverflow(f64),

    #[error("partition covers {got} nodes, graph has {expected}")]
    PartitionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("consensus clustering did not converge after {0} outer iterations")]
    ConsensusNoConvergence(usize),

    #[error("rank-deficient design: {0}")]
    Collinear(String),

    #[error("{0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
