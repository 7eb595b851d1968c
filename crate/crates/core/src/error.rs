use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree sequences have different sums: {first} and {second}")]
    SumMismatch { first: u64, second: u64 },

    #[error("sum {sum} exceeds the brute-force threshold {threshold}")]
    ThresholdExceeded { sum: u64, threshold: u64 },

    #[error("n = {n} exceeds the configured bound {bound}")]
    BoundExceeded { n: u32, bound: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file line {line}: {reason}")]
    CacheFormat { line: usize, reason: String },

    #[error("malformed matrix document: {0}")]
    MatrixFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
