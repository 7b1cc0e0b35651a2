use thiserror::Error;

/// Errors surfaced by games, solvers, metrics, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("game tree exceeds the traversal cap of {cap} nodes")]
    TreeTooLarge { cap: u64 },
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("profile is not pure at infoset {0}")]
    NotPureProfile(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("checkpoint format error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
