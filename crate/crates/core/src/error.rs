use std::path::PathBuf;

use crate::io::pnm::PnmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("levels must be in 1..=8, got {0}")]
    InvalidLevels(u8),
    #[error("threshold must be in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("tree depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: u8, found: u8 },
    #[error("dimension mismatch: expected {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)]
    DimensionMismatch {
        expected: (u32, u32),
        found: (u32, u32),
    },
    #[error("not enough frames: need at least {needed}, found {found}")]
    NotEnoughFrames { needed: usize, found: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("malformed model file: {0}")]
    ModelFormat(String),
    #[error("moving box leaves the frame at frame {frame}")]
    BoxOutOfBounds { frame: usize },
    #[error("unmatched files: {}", .0.join(", "))]
    UnmatchedFiles(Vec<String>),
    #[error(transparent)]
    Pnm(#[from] PnmError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short stable identifier used as the CLI error prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidLevels(_) => "invalid-levels",
            Error::InvalidThreshold(_) => "invalid-threshold",
            Error::InvalidConfig(_) => "invalid-config",
            Error::DepthMismatch { .. } => "depth-mismatch",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotEnoughFrames { .. } => "not-enough-frames",
            Error::InvalidFrame(_) => "invalid-frame",
            Error::ModelFormat(_) => "model-format",
            Error::BoxOutOfBounds { .. } => "box-out-of-bounds",
            Error::UnmatchedFiles(_) => "unmatched-files",
            Error::Pnm(_) => "pnm",
            Error::Io { .. } => "io",
            Error::File { source, .. } => source.kind(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches the file that produced this error.
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        match self {
            e @ (Error::Io { .. } | Error::File { .. }) => e,
            e => Error::File {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }
}
