use thiserror::Error;

/// Work counters carried by a search that stopped early.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartialStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Error)]
pub enum IslandError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid brick: {0}")]
    InvalidBrick(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("brick {0} is not a member of the system")]
    NotAMember(String),

    #[error("bricks are not laminar: {0} and {1} overlap without nesting")]
    NotLaminar(String, String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{what} cap of {limit} exceeded (nodes {}, memo hits {})", stats.nodes, stats.memo_hits)]
    CapExceeded {
        what: &'static str,
        limit: u64,
        stats: PartialStats,
    },
}

pub type Result<T, E = IslandError> = std::result::Result<T, E>;
