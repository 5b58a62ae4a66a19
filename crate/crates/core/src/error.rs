//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge list line {line}: {msg}")]
    ParseEdgeList { line: usize, msg: String },

    #[error("edge list contains no data lines")]
    EmptyEdgeList,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("privacy policy does not match graph: {0}")]
    PolicyMismatch(String),

    #[error("node levels are not non-decreasing in node index; reorder the graph first")]
    NotReordered,

    #[error("obfuscated matrix is for {expected} nodes, graph has {actual}")]
    MatrixMismatch { expected: usize, actual: usize },

    #[error("true count is zero; normalized MSE/MRE are undefined, use raw squared error instead")]
    TruthZero,

    #[error("ledger charge for edge ({u}, {v}) which the policy does not contain")]
    UnknownLedgerEdge { u: u32, v: u32 },

    #[error("matrix file: {0}")]
    MatrixFormat(String),

    #[error("binomial overflow computing C({n}, {k})")]
    BinomialOverflow { n: u64, k: u64 },

    #[error("experiment config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
