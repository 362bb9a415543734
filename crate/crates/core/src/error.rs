use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: u32,
        left_h: u32,
        right_w: u32,
        right_h: u32,
    },

    #[error("invalid point series: {0}")]
    InvalidSeries(String),

    #[error("series lies entirely outside the {width}x{height} raster")]
    EmptyMask { width: u32, height: u32 },

    #[error("mask rejected: {pixels} foreground pixels, need at least {min}")]
    RejectedMask { pixels: usize, min: usize },

    #[error("degenerate axis calibration: {0}")]
    Calibration(String),

    #[error("chart generation failed: {0}")]
    Generation(String),

    /// Malformed file content. `pointer` is a JSON pointer to the offending value.
    #[error("format error at {pointer}: {message}")]
    Format { pointer: String, message: String },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn format(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
