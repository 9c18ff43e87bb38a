use thiserror::Error;

/// Errors raised by builders, solvers and parsers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("bad-parameters: {0}")]
    BadParameters(String),
    #[error("bad-constraints: {0}")]
    BadConstraints(String),
    #[error("bad-region: {0}")]
    BadRegion(String),
    #[error("bad-parity: {0}")]
    BadParity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no-unique-collection: {0}")]
    NoUniqueCollection(String),
    #[error("has-even-face: {0}")]
    HasEvenFace(String),
    #[error("not-transverse: {0}")]
    NotTransverse(String),
    #[error("not-a-bounding-disk: {0}")]
    NotABoundingDisk(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
