use std::path::PathBuf;

use crate::model::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("segment {segment_id}: score {value} is not finite")]
    NonFiniteScore { segment_id: String, value: f64 },

    #[error("no {class} segments in the dataset; the ROC curve is undefined without both classes")]
    DegenerateClass { class: Label },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("curves were built from different ground-truth labelings: {0}")]
    MismatchedGroundTruth(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: duplicate segment id {id:?} (line {line})", path.display())]
    DuplicateSegment {
        path: PathBuf,
        id: String,
        line: usize,
    },

    #[error("system {system:?}: {gold} gold scores but {metric} metric scores")]
    LengthMismatch {
        system: String,
        gold: usize,
        metric: usize,
    },

    #[error("unknown system {requested:?}; available: {}", available.join(", "))]
    UnknownSystem {
        requested: String,
        available: Vec<String>,
    },

    #[error("no usable records: {0}")]
    Empty(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
