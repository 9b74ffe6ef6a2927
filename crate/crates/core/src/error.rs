use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coordinate index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("objective does not support incremental evaluation")]
    IncrementalUnsupported,
    #[error(
        "simplex workspace for dimension {dim} needs {required_bytes} bytes, \
         above the memory ceiling of {ceiling_bytes} bytes"
    )]
    MemoryLimit {
        dim: usize,
        required_bytes: u64,
        ceiling_bytes: u64,
    },
    #[error("byte-accounting hooks are not installed in this process")]
    TrackingUnavailable,
    #[error("byte accounting is disabled")]
    TrackingDisabled,
}
