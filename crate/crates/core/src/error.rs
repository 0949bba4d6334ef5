use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid network: {0}")]
    Network(String),

    #[error("cell index {index} out of range for a network with {n} cells")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("partition length mismatch: expected {expected} labels, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("the null partition has no block decomposition")]
    NullPartition,

    #[error("ambiguous tolerance comparison between cells {i} and {j}: coordinates are both equal and opposite within tolerance")]
    Ambiguous { i: usize, j: usize },

    #[error("partition {partition} is not {required}")]
    NotInClass { partition: String, required: String },

    #[error("n = {n} exceeds the enumeration limit {limit} ({estimate} tagged partitions)")]
    SizeLimit {
        n: usize,
        limit: usize,
        estimate: u128,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
