//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any stage of the toolkit.
#[derive(Error, Debug)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("schema mismatch in {path}: expected column {expected:?} at position {position}, found {found:?}")]
    Schema {
        path: String,
        position: usize,
        expected: String,
        found: String,
    },

    #[error("bad row at line {line} of {path}: {reason}")]
    Row {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("size error: {0}")]
    Size(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("column {0:?} is constant (zero variance)")]
    DegenerateColumn(String),

    #[error("design matrix is rank deficient (pivot {pivot} of {cols} below tolerance)")]
    RankDeficient { pivot: usize, cols: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("optimizer did not converge within {iterations} iterations ({context})")]
    Convergence { iterations: usize, context: String },

    #[error("ARIMA CSS search did not converge within {iterations} iterations; best-so-far fit attached")]
    ArimaNotConverged {
        iterations: usize,
        model: Box<crate::timeseries::ArimaModel>,
    },

    #[error("gradient descent diverged after {iterations} iterations; try a smaller learning rate")]
    Divergence { iterations: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("pipeline stage {stage} failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite value produced in {0}")]
    NonFinite(String),
}

impl Error {
    /// Process exit code class for the CLI: 2 config, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io { .. } | Error::Schema { .. } | Error::Row { .. } => 3,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
