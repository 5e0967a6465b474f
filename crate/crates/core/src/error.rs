use thiserror::Error;

/// Errors raised across the crate.
///
/// Negative mathematical outcomes (an obstructed solve, a non-unique
/// velocity) are not errors; they are reported through status fields.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("symbol `{label}` is undefined at lambda = {lambda}")]
    SymbolUndefined { label: String, lambda: f64 },

    #[error("invalid scale: {0}")]
    InvalidScale(String),

    #[error("invalid time: {0}")]
    InvalidTime(String),

    #[error("invalid times: {0}")]
    InvalidTimes(String),

    #[error("snapshot data incompatible: residual {residual:e} exceeds {tolerance:e}")]
    IncompatibleData { residual: f64, tolerance: f64 },

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("sphere parameters mismatch: n = {left} vs n = {right}")]
    ParamsMismatch { left: u32, right: u32 },

    #[error("invalid sphere index: {0}")]
    InvalidIndex(String),

    #[error("operation requires odd sphere dimension, got n = {0}")]
    RequiresOddDimension(u32),

    #[error("operation requires zonal data")]
    RequiresZonal,

    #[error("cannot classify: {0}")]
    Unclassifiable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
