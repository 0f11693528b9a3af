use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad category of a failure, used by the CLI to select an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Parameter,
    Degenerate,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("normal {index} is not unit length (norm {norm})")]
    NonUnitNormal { index: usize, norm: f64 },

    #[error("requested {requested} key points but only {available} points are unmasked")]
    InsufficientUnmasked { requested: usize, available: usize },

    #[error("requested {requested} key points but only {available} points have positive weight")]
    InsufficientSupport { requested: usize, available: usize },

    #[error("no valid interpolation direction for point {index}")]
    NoInterpolant { index: usize },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Parameter(_)
            | Error::InsufficientUnmasked { .. }
            | Error::InsufficientSupport { .. } => ErrorKind::Parameter,
            Error::EmptyCloud
            | Error::NonFinite { .. }
            | Error::NonUnitNormal { .. }
            | Error::NoInterpolant { .. }
            | Error::Degenerate(_) => ErrorKind::Degenerate,
            Error::Io { .. } => ErrorKind::Io,
        }
    }
}
