use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown level {value:?} in categorical column {column:?} at row {row}")]
    UnknownLevel {
        column: String,
        row: usize,
        value: String,
    },

    #[error("cannot parse {value:?} as a number in column {column:?} at row {row}")]
    Parse {
        column: String,
        row: usize,
        value: String,
    },

    #[error("degenerate column {column:?}: fewer than two distinct values")]
    DegenerateColumn { column: String },

    #[error("no rows left after casewise deletion")]
    EmptyData,

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("categorical predictor {column:?} has {levels} observed levels (at most {max} supported)")]
    TooManyLevels {
        column: String,
        levels: usize,
        max: usize,
    },

    #[error("logistic response has a single class")]
    SingleClass,

    #[error("predictor {index} has zero variance")]
    ZeroVariance { index: usize },

    #[error("lasso input must be all-continuous or all-binary; rerun with the ±1 dichotomization (--dichotomize)")]
    NeedsDichotomization,

    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema(_) | Error::UnknownLevel { .. } | Error::Parse { .. } => "schema",
            Error::DegenerateColumn { .. } => "degenerate-column",
            Error::EmptyData => "empty-data",
            Error::Param(_) | Error::TooManyLevels { .. } => "param",
            Error::SingleClass | Error::ZeroVariance { .. } => "lasso",
            Error::NeedsDichotomization => "needs-dichotomize",
            Error::NotFound(_) => "not-found",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
