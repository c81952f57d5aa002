use thiserror::Error;

/// Errors raised while validating or loading trajectory data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DataError {
    #[error("identifier must be non-empty")]
    EmptyId,
    #[error("travel path has no visits")]
    EmptyPath,
    #[error("visit {index}: exit {exit} is before entrance {entrance}")]
    ExitBeforeEntrance { index: usize, entrance: u64, exit: u64 },
    #[error("visit {index}: entrance {entrance} does not follow previous exit {prev_exit}")]
    Overlap { index: usize, prev_exit: u64, entrance: u64 },
    #[error("object {object}: {source}")]
    InObject {
        object: String,
        #[source]
        source: Box<DataError>,
    },
    #[error("duplicate object id {0}")]
    DuplicateObject(String),
    #[error("overlap group references unknown camera {0}")]
    UnknownCamera(String),
    #[error("camera {0} appears in more than one overlap group")]
    CameraInTwoGroups(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("object {object}: timestamps out of order at sample {index}")]
    UnorderedSamples { object: String, index: usize },
    #[error("io: {0}")]
    Io(String),
    #[error("invalid generator config: {0}")]
    Config(String),
}

impl From<std::io::Error> for DataError {
    fn from(e: std::io::Error) -> Self {
        DataError::Io(e.to_string())
    }
}

/// Errors raised by the mining entry points.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("mining exceeded its time budget")]
    Timeout,
    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Data(#[from] DataError),
}
