use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Domain failures (a solve stopping at vanishing curvature, a search with no
/// accepted trial) are reported through result types, not through this enum.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("curvature fell below the floor {floor:e} at s = {s}")]
    CurvatureFloor { s: f64, floor: f64 },
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
