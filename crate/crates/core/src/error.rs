use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed graph6 string {text:?}: {reason}")]
    Graph6 { text: String, reason: String },

    #[error("unknown pattern name {0:?}")]
    UnknownPattern(String),

    #[error("anchor {anchor} out of range for a graph with {n} vertices")]
    AnchorOutOfRange { anchor: usize, n: usize },

    #[error("{what}: {value} exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("partition covers {partition} vertices but the graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("expected {expected}, got {found}")]
    BasisMismatch { expected: String, found: String },

    #[error(
        "plan of width {width} refused on a host with {host_vertices} vertices (override the width guard to force it)"
    )]
    WidthGuard { width: usize, host_vertices: usize },

    #[error("{source_name}:{line}: {message}")]
    Dataset {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("duplicate graph id {0:?}")]
    DuplicateId(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that come from a size or resource limit.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. } | Error::WidthGuard { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
