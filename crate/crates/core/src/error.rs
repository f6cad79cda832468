use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} levels, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coalition {coalition} is not a submultiset of {universe}")]
    NotSubmultiset { coalition: String, universe: String },

    #[error("invalid multiset: {0}")]
    InvalidMultiset(String),

    #[error("enumerating {size} coalitions exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("invalid hierarchical spec: {0}")]
    InvalidSpec(String),

    #[error("spec is not canonical: {0}")]
    NonCanonical(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("game is not complete")]
    NotComplete,

    #[error("level {level} out of range for {levels} levels")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("objective is unbounded")]
    Unbounded,

    #[error("validation failure: {0}")]
    Validation(String),

    #[error("unknown case tag `{0}`")]
    UnknownCase(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
