use thiserror::Error;

/// Failures raised by the disk machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PshError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular evaluation at {0}")]
    Singularity(String),
    #[error("level set is empty: c = {c} lies outside the range of the exhaustion (inf ≈ {inf})")]
    EmptyLevel { c: f64, inf: f64 },
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),
    #[error("zero on or outside the unit circle: {0}")]
    InvalidZero(String),
    #[error("boundary log-modulus is not integrable")]
    NotLogIntegrable,
    #[error("no harmonic majorant: the classical boundary norm diverges")]
    NoMajorant,
    #[error("invalid conformal map: {0}")]
    InvalidMap(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for PshError {
    fn from(e: std::io::Error) -> Self {
        PshError::Io(e.to_string())
    }
}

impl From<csv::Error> for PshError {
    fn from(e: csv::Error) -> Self {
        PshError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for PshError {
    fn from(e: serde_json::Error) -> Self {
        PshError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, PshError>;
