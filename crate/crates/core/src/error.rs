use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no minority class: dataset has zero positive examples")]
    NoMinorityClass,

    #[error("no majority class: dataset has zero negative examples")]
    NoMajorityClass,

    #[error("insufficient minority class: need at least {needed} positive rows, found {found}")]
    InsufficientMinority { needed: usize, found: usize },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("row {row} has {found} values, expected {expected}")]
    RowArity {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unmapped class value(s): {}", .0.join(", "))]
    UnmappedClass(Vec<String>),

    #[error("invalid class mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("invalid entropy order alpha={0}: must be > 0 and != 1")]
    InvalidAlpha(f64),

    #[error("invalid oversampling amount {0}: must be a positive multiple of 100")]
    InvalidAmount(u32),

    #[error("unknown method '{given}', expected one of: {}", .valid.join(", "))]
    UnknownMethod {
        given: String,
        valid: Vec<&'static str>,
    },

    #[error("invalid cluster count {requested} for {rows} rows")]
    InvalidClusterCount { requested: usize, rows: usize },

    #[error("invalid neighbor count: {0}")]
    InvalidK(String),

    #[error("empty neighbor pool")]
    EmptyPool,

    #[error("fold {fold} has zero positive examples; use fewer folds (have {positives} positives)")]
    FoldWithoutPositives { fold: usize, positives: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dataset '{name}': {source}")]
    Dataset {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("leakage: synthetic row derived from test-split row {0}")]
    Leakage(usize),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Usage-class errors (bad flags or configuration) as opposed to data errors.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Dataset { source, .. } => source.is_usage(),
            e => matches!(
                e,
                Error::InvalidAlpha(_) | Error::InvalidAmount(_) | Error::UnknownMethod { .. } | Error::Config(_) | Error::InvalidK(_)
            ),
        }
    }
}
