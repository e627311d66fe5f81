use thiserror::Error;

/// Errors raised by forest construction and per-point updates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForestError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("point has no coordinates")]
    EmptyPoint,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate {value} at position {position}")]
    NonFiniteCoordinate { position: usize, value: f64 },
}

/// Errors raised while evaluating score streams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("AUC undefined: {positives} anomalies and {negatives} genuine records")]
    AucUndefined { positives: usize, negatives: usize },
    #[error("window must be at least 2, got {0}")]
    WindowTooSmall(usize),
}

/// Errors raised while loading a labeled dataset.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error at row {row}: {source}")]
    Csv {
        row: usize,
        #[source]
        source: csv::Error,
    },
    #[error("file is empty or has no data rows")]
    Empty,
    #[error("label column {0} not found in header")]
    MissingColumn(String),
    #[error("dataset needs at least one feature column besides the label")]
    NoFeatures,
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    NotNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column {column:?}: value {value} is not finite")]
    NonFinite {
        row: usize,
        column: String,
        value: f64,
    },
}
