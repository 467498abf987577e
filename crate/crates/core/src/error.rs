use std::path::PathBuf;

use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("non-numeric cell {value:?} at row {row}, column `{column}`")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("non-finite value at row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset needs at least one feature column besides the target")]
    NoFeatures,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least {needed} rows are required, got {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("normalization undefined: {0} of the target is zero")]
    NormalizationUndefined(&'static str),

    #[error("design matrix is rank deficient (collinear features)")]
    RankDeficient,

    #[error("MAPE is undefined for zero targets at rows {rows:?}")]
    ZeroTargets { rows: Vec<usize> },

    #[error("invalid instance weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("linear program solver returned {0:?} on a problem that must be optimal")]
    Solver(LpStatus),

    #[error("invalid linear program: {0}")]
    InvalidProblem(String),

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("problem too large for exhaustive enumeration: {0}")]
    GuardExceeded(String),

    #[error("invalid bound input: {0}")]
    InvalidBoundInput(String),

    #[error("hypothesis violated: epsilon = {epsilon} must lie in (0, B/4) with B = {envelope}")]
    HypothesisViolated { epsilon: f64, envelope: f64 },

    #[error("cannot parse rate expression {0:?}")]
    RateSyntax(String),
}

impl Error {
    /// Process exit code for the command-line front end: 1 for bad input
    /// data, 2 for failures while fitting or evaluating bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Csv(_)
            | Error::Json(_)
            | Error::MissingColumn(_)
            | Error::NonNumeric { .. }
            | Error::NonFinite { .. }
            | Error::EmptyDataset
            | Error::NoFeatures
            | Error::DimensionMismatch { .. }
            | Error::GuardExceeded(_) => 1,
            _ => 2,
        }
    }
}
