use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at position {index}")]
    NonFinite { index: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("label count {labels} does not match row count {rows}")]
    LabelCount { rows: usize, labels: usize },

    #[error("need at least {required} units, found {found}")]
    NotEnoughUnits { required: usize, found: usize },

    #[error("step {step} is past the schedule length {total}")]
    StepOutOfRange { step: usize, total: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unit index {index} out of range for {len} units")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("node {0} is not a leaf")]
    NotALeaf(usize),

    #[error("graph has no edges")]
    NoEdges,

    #[error("node {0} has no neighbors")]
    Isolated(usize),

    #[error("profile shape mismatch: expected {expected_len}x{expected_symbols}, found {found_len}x{found_symbols}")]
    ProfileShape {
        expected_len: usize,
        expected_symbols: usize,
        found_len: usize,
        found_symbols: usize,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
