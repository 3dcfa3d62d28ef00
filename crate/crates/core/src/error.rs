use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("impossible state: {0}")]
    ImpossibleState(String),

    #[error("edge set is not a forest: {0}")]
    InvalidForest(String),

    #[error("opposite ideal edges are never simultaneously realized: {0} / {1}")]
    OppositePair(String, String),

    #[error("no simultaneous-realization template for {0} / {1}")]
    UnsupportedPair(String, String),

    #[error("descending link of the identity rose is empty")]
    EmptyLink,

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
