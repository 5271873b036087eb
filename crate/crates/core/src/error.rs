use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed container bytes. `offset` is the position where decoding failed.
    #[error("format error at byte {offset}: {reason}")]
    Format { offset: u64, reason: String },

    #[error("non-finite value at element {index}")]
    NonFinite { index: usize },

    #[error("label {value} out of range at pixel {index} (expected 0..=8)")]
    LabelOutOfRange { value: u8, index: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Eq. 1 has no denominator: the saliency puts no mass on retinal layers 1..=7.
    #[error("degenerate explanation: zero saliency mass on retinal layers ILM..OS-RPE")]
    DegenerateExplanation,

    #[error("unknown class label {0:?}")]
    UnknownClass(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Validation(String),

    /// Failure while processing one scan of a batch.
    #[error("scan {id}: {source}")]
    Scan {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn format(offset: u64, reason: impl Into<String>) -> Self {
        Error::Format {
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_scan(self, id: impl Into<String>) -> Self {
        Error::Scan {
            id: id.into(),
            source: Box::new(self),
        }
    }

    /// Process exit code for the command-line front end: 2 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::Scan { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
