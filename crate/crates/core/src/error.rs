use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty-data: {0}")]
    EmptyData(String),

    #[error("invalid-distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid-axes: {0}")]
    InvalidAxes(String),

    #[error("invalid-tensor: {0}")]
    InvalidTensor(String),

    #[error("degenerate-denominator: synergy {synergy} bits with a zero denominator")]
    DegenerateDenominator { synergy: f64 },

    #[error("zero-mean-baseline: cross-group mean of {0} is zero")]
    ZeroMeanBaseline(&'static str),

    #[error("series-too-short: need at least {min} values, got {len}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("non-finite-value at index {0}")]
    NonFinite(usize),

    #[error("shape-mismatch: {0}")]
    ShapeMismatch(String),

    #[error("panel-inconsistent: {0}")]
    PanelInconsistent(String),

    #[error("insufficient-points: {points} points for a degree-{degree} fit")]
    InsufficientPoints { points: usize, degree: usize },

    #[error("singular-fit: {0}")]
    SingularFit(String),

    #[error("degenerate-series: {0}")]
    DegenerateSeries(String),

    #[error("schema-error: {0}")]
    Schema(String),

    #[error("bad-count at row {row}: {value:?}")]
    BadCount { row: usize, value: String },

    #[error("bad-value at row {row}, column {column}: {value:?}")]
    BadValue {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unmapped-code: {}", .0.join(", "))]
    UnmappedCode(Vec<String>),

    #[error("crosswalk-error: {0}")]
    Crosswalk(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable kebab-case identifier for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyData(_) => "empty-data",
            Error::InvalidDistribution(_) => "invalid-distribution",
            Error::InvalidAxes(_) => "invalid-axes",
            Error::InvalidTensor(_) => "invalid-tensor",
            Error::DegenerateDenominator { .. } => "degenerate-denominator",
            Error::ZeroMeanBaseline(_) => "zero-mean-baseline",
            Error::SeriesTooShort { .. } => "series-too-short",
            Error::NonFinite(_) => "non-finite-value",
            Error::ShapeMismatch(_) => "shape-mismatch",
            Error::PanelInconsistent(_) => "panel-inconsistent",
            Error::InsufficientPoints { .. } => "insufficient-points",
            Error::SingularFit(_) => "singular-fit",
            Error::DegenerateSeries(_) => "degenerate-series",
            Error::Schema(_) => "schema-error",
            Error::BadCount { .. } => "bad-count",
            Error::BadValue { .. } => "bad-value",
            Error::UnmappedCode(_) => "unmapped-code",
            Error::Crosswalk(_) => "crosswalk-error",
            Error::Io { .. } => "io-error",
            Error::Csv(_) => "csv-error",
            Error::Json(_) => "json-error",
        }
    }

    /// Process exit code: 2 for data problems, 3 for numeric degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateDenominator { .. }
            | Error::ZeroMeanBaseline(_)
            | Error::SeriesTooShort { .. }
            | Error::InsufficientPoints { .. }
            | Error::SingularFit(_)
            | Error::DegenerateSeries(_) => 3,
            _ => 2,
        }
    }
}
