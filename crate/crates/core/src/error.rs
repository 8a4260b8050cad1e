use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("inconsistent vertex count: expected {expected}, found {found} in subject {subject}")]
    InconsistentVertexCount {
        expected: usize,
        found: usize,
        subject: String,
    },

    #[error("empty group")]
    EmptyGroup,

    #[error("duplicate subject_id {0}")]
    DuplicateSubject(String),

    #[error("zero-variance ROI {roi} in subject {subject}: Pearson correlation undefined")]
    ZeroVariance { roi: usize, subject: String },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{0}")]
    Alpha(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver diverged at iteration {iteration}: objective is not finite")]
    Divergence { iteration: usize },

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable code, printed by the CLI and mapped onto FFI status values.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "E_IO",
            Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => "E_PARSE",
            Error::InvalidGraph(_)
            | Error::InconsistentVertexCount { .. }
            | Error::EmptyGroup
            | Error::DuplicateSubject(_)
            | Error::VertexOutOfRange { .. } => "E_GRAPH",
            Error::ZeroVariance { .. } => "E_TIMESERIES",
            Error::DimensionMismatch(..) => "E_DIMENSION",
            Error::Alpha(_) => "E_ALPHA",
            Error::InvalidArgument(_) => "E_ARGUMENT",
            Error::Divergence { .. } => "E_SOLVER",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
