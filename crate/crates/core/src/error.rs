use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degree {degree} outside model support 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("below phase transition")]
    BelowPhaseTransition,

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("even degree sum not reached after {0} attempts")]
    EvenSumExhausted(usize),

    #[error("choice table inconsistent with graph: {0}")]
    InconsistentTable(String),

    #[error("degenerate giant component (size {0})")]
    DegenerateGiant(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
