use std::path::PathBuf;

use crate::dynamics::DynamicsState;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear program is infeasible (Farkas multipliers attached)")]
    Infeasible {
        /// Nonnegative row multipliers `y` with `yᵀG ≥ 0` on sign-constrained
        /// columns, `yᵀG = 0` on free columns, and `yᵀp < 0`.
        witness: Vec<f64>,
    },

    #[error("linear program is unbounded along a recession ray")]
    Unbounded {
        /// Direction `d` with `Gd ≤ 0`, sign constraints respected and a
        /// strictly improving objective.
        ray: Vec<f64>,
    },

    #[error("integration diverged at t = {t}")]
    Divergence {
        t: f64,
        last_finite: Box<DynamicsState>,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("label error: {0}")]
    Label(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: usize },

    #[error("undefined result: {0}")]
    Undefined(String),

    #[error("I/O error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
