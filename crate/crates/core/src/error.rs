use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {what}: {text:?}")]
    Parse {
        path: PathBuf,
        line: usize,
        what: &'static str,
        text: String,
    },

    #[error("{path}:{line}: expected {expected} attribute columns, found {found}")]
    RaggedAttributes {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}:{line}: edge endpoint {node} out of range for {num_nodes} nodes")]
    EndpointOutOfRange {
        path: PathBuf,
        line: usize,
        node: usize,
        num_nodes: usize,
    },

    #[error("{path}: expected {expected} rows, found {found}")]
    RowCount {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("node {node} has degree 0; normalization without self-loops is undefined")]
    IsolatedNode { node: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("graph has no labels")]
    MissingLabels,

    #[error("label set is degenerate: {positives} positives, {negatives} negatives")]
    DegenerateLabels { positives: usize, negatives: usize },

    #[error("not enough nodes: need {needed}, {available} available")]
    InsufficientNodes { needed: usize, available: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("training model (t={t}, k={k}): {source}")]
    Member {
        t: usize,
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("graph mismatch: ensemble trained on {expected} nodes, got {found}")]
    GraphMismatch { expected: usize, found: usize },

    #[error("malformed model file {path}: {message}")]
    Model { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
