use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("edge {edge} has {found} vertices, expected {expected}")]
    WrongArity {
        edge: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge {edge} references vertex {vertex}, outside 0..{n}")]
    IndexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge} repeats vertex {vertex}")]
    DuplicateVertexInEdge { edge: usize, vertex: usize },
    #[error("edge {edge} duplicates edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("vertex {vertex} belongs to no edge")]
    IsolatedVertex { vertex: usize },
    #[error("edge cardinality must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("tensor order must be even, got {0}")]
    OddOrder(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("simple graph: {0}")]
    InvalidGraph(String),
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dense tensor would have {entries} entries (cap {cap})")]
    TooLarge { entries: u128, cap: u128 },
    #[error("B x^k = {0} is not positive")]
    NonPositiveB(f64),
    #[error("line search failed after {0} backtracks")]
    LineSearchFailed(usize),
    #[error("no sign change of the sunflower polynomial on ({lo}, {hi})")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("tensor {0} is not entrywise nonnegative")]
    NotNonnegative(&'static str),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("H-eigenvalues need positive degrees; vertex {0} is isolated")]
    IsolatedVertexInHMode(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
