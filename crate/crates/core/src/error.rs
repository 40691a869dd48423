use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("directed cycle: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },

    #[error("self-loop on node `{0}`")]
    SelfLoop(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("duplicate arc {0}")]
    DuplicateArc(String),

    #[error("invalid node name `{0}` (expected [A-Za-z0-9_]+)")]
    InvalidName(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cause and effect must differ (both `{0}`)")]
    SameNode(String),

    #[error("triple {0} is not front-door reducible")]
    NotReducible(String),

    #[error("{what} size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("zero probability in adjustment: {0}")]
    ZeroProbability(String),

    #[error("graph mismatch: {0}")]
    GraphMismatch(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model: {0}")]
    Model(String),
}

impl Error {
    /// Strips any line provenance wrapper.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}
