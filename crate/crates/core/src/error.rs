use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed network document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("connection {from} -> {to} references unknown node `{missing}`")]
    DanglingEndpoint {
        from: String,
        to: String,
        missing: String,
    },
    #[error("duplicate connection {0} -> {1} (parallel connections need distinct trajectory tags)")]
    DuplicateConnection(String, String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` is not on any cycle")]
    NotOnCycle(String),
    #[error("node `{0}` is not a distribution node")]
    NotDistribution(String),
    #[error("no connection {0} -> {1}")]
    MissingConnection(String, String),
    #[error("label `{label}` does not resolve at node `{node}`")]
    UnresolvedLabel { node: String, label: String },
    #[error("cycle count exceeds cap {0}")]
    CycleCap(usize),
    #[error("path count exceeds cap {0}")]
    PathCap(usize),
    #[error("path must contain at least {min} nodes, got {got}")]
    ShortPath { min: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("region uses the same index {0} as tangent and axis")]
    SameIndex(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("vector field: {0}")]
    Field(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("ambiguous itinerary: {0}")]
    Ambiguous(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
