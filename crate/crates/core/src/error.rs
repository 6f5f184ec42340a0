use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received structurally invalid input.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Vectors of different dimension were combined.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A matrix contained NaN or infinite entries.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    /// Some point is held by no surviving node, so no recovery vector exists.
    #[error("point {point} is not covered by any surviving node")]
    PointUnrecoverable { point: usize },

    /// The uniform recovery strategy cannot meet the requested delta.
    #[error("recovery needs delta {achieved} but only {requested} was allowed")]
    DeltaExceeded { achieved: f64, requested: f64 },

    /// The exact k-median search is capped to small instances.
    #[error("exact solver limit exceeded: {distinct} distinct points > {max}")]
    InstanceTooLarge { distinct: usize, max: usize },

    /// No surviving node delivered any usable summary.
    #[error("aggregation received no data from surviving nodes")]
    EmptyAggregate,

    /// A pipeline was configured with incompatible options.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A verification probe observed a violated approximation guarantee.
    #[error("guarantee check failed ({name}): {detail}")]
    GuaranteeViolated { name: &'static str, detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A CSV line failed to parse as numeric data.
    #[error("csv parse error at line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
