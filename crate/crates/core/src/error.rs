use std::path::PathBuf;

use crate::voxel::Pos;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("two placements share position {0}")]
    Overlap(Pos),
    #[error("local position {0} is outside the shape box")]
    OutOfBounds(Pos),
    #[error("target cell {0} is already occupied")]
    Occupied(Pos),
    #[error("genome length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("genome length {0} is not a positive multiple of 3")]
    Length(usize),
    #[error("descriptor {descriptor:?} does not fit layout dimensions {dims:?}")]
    Bounds { descriptor: Vec<usize>, dims: Vec<usize> },
    #[error("exit log is empty")]
    EmptyExitLog,
    #[error("archive has no occupied bins")]
    NoOccupiedBins,
    #[error("contingency table has no observations")]
    DegenerateTable,
    #[error("selector matched nothing: {0}")]
    Selector(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
