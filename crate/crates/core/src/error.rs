use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("graph has {count} vertices, limit is {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("word length {len} exceeds the cap of {cap} letters")]
    WordTooLong { len: usize, cap: usize },
    #[error("automorphisms or words live over different graphs")]
    GraphMismatch,
    #[error("malformed generator: {0}")]
    MalformedGenerator(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("node is not saturated")]
    Unsaturated,
    /// An internal consistency check failed. This indicates a bug or an
    /// input outside the cases the decomposition handles.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
