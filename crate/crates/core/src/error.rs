use thiserror::Error;

/// Errors produced while parsing input or running bounded computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("profile is empty")]
    EmptyProfile,
    #[error("ragged rows: agent {agent} ranks {found} objects, agent 1 ranks {expected}")]
    RaggedRows {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-square market: {agents} agents but {objects} objects per ranking")]
    NonSquare { agents: usize, objects: usize },
    #[error("agent {agent} ranks object `{object}` more than once")]
    DuplicateObject { agent: usize, object: String },
    #[error("agent {agent} does not rank object `{object}`")]
    MissingObject { agent: usize, object: String },
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("n = {n} exceeds the {what} cap of {cap}; pass an explicit override to proceed")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("profile space for n = {0} is too large to index")]
    SpaceTooLarge(usize),
    #[error("index window {start}..{end} lies outside the profile space of size {total}")]
    InvalidWindow { start: u64, end: u64, total: u64 },
    #[error("dimension mismatch: expected n = {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
