use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance too large for exact oracle: {size} goods exceeds limit {limit}")]
    OracleLimit { size: usize, limit: usize },

    #[error("too many agents for group enumeration: {agents} exceeds limit {limit}")]
    GroupLimit { agents: usize, limit: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("{what} index {index} out of range (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("empty good set")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
