use thiserror::Error;

/// Errors produced by rule construction, body validation, functional
/// evaluation, and the numeric pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} not supported (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input is not a unit vector (norm {norm:.3e})")]
    NotUnit { norm: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("body is not C2+ at direction {dir:?} (curvature value {value:.6e})")]
    NotSmooth { dir: Vec<f64>, value: f64 },

    #[error("non-finite integrand at node {index} (direction {dir:?})")]
    NonFiniteIntegrand { index: usize, dir: Vec<f64> },

    #[error("optimization did not converge for direction {dir:?}: {detail}")]
    Convergence { dir: Vec<f64>, detail: String },

    #[error("exponent p = -{n} is excluded for bodies of dimension {n}")]
    ExcludedExponent { n: usize },

    #[error("random body rejected after {attempts} attempts; try a smaller degree than {degree}")]
    RejectionExhausted { attempts: usize, degree: usize },

    #[error("weight never reaches level {level:.3e} along ray {dir:?}")]
    WeightExhausted { level: f64, dir: Vec<f64> },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit class used by the command-line front end:
    /// 2 for input/validation problems, 3 for numerical non-convergence.
    pub fn exit_class(&self) -> i32 {
        match self {
            Error::Convergence { .. } | Error::WeightExhausted { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
