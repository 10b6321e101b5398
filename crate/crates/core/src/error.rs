use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the toolkit.
///
/// Variants split into validation problems (bad input, bad configuration)
/// and runtime problems (I/O, numerically degenerate data); the command
/// line maps them to different exit codes via [`Error::is_validation`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("term {term:?} appears under both {first:?} and {second:?}")]
    DuplicateTerm {
        term: String,
        first: String,
        second: String,
    },

    #[error("emotion {0:?} has no terms")]
    EmptyEmotion(String),

    #[error("emotion {0:?} is defined more than once")]
    DuplicateEmotion(String),

    #[error("dictionary line {line}: {reason}")]
    DictionaryFormat { line: usize, reason: String },

    #[error("filtering would remove every term of emotion {0:?}")]
    FilterEmptiesEmotion(String),

    #[error("unknown term {0:?}")]
    UnknownTerm(String),

    #[error("unknown emotion {0:?}")]
    UnknownEmotion(String),

    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("constant series")]
    ConstantSeries,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("no complete cycles of length {period}")]
    NoCompleteCycles { period: usize },

    #[error("profile value for phase {phase} is not positive")]
    NonPositiveProfile { phase: usize },

    #[error("non-positive value {value} at index {index}; use a smaller noise scale")]
    NonPositiveOutput { index: usize, value: f64 },

    #[error("series of length {len} is shorter than the segment length {segment}; use a smaller segment")]
    SegmentTooLong { len: usize, segment: usize },

    #[error("degenerate scores: all points identical")]
    DegenerateScores,

    #[error("cannot read {path}: {source}")]
    ReadPath {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether this error stems from invalid input or configuration
    /// (as opposed to a failure while processing valid input).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DuplicateTerm { .. }
                | Error::EmptyEmotion(_)
                | Error::DuplicateEmotion(_)
                | Error::DictionaryFormat { .. }
                | Error::UnknownTerm(_)
                | Error::UnknownEmotion(_)
                | Error::MalformedRecord { .. }
                | Error::Config(_)
                | Error::ReadPath { .. }
        )
    }
}
