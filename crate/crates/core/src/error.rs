use num_complex::Complex64;
use thiserror::Error;

use crate::normedspace::NormKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {z} lies outside the closed unit disk")]
    Domain { z: Complex64 },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a self-map of the disk: boundary sup |phi| = {certificate}")]
    NotSelfMap { certificate: f64 },

    #[error("unsupported induced norm pair {from:?} -> {to:?}")]
    UnsupportedNormPair { from: NormKind, to: NormKind },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("evaluator returned NaN at z = {z}")]
    Evaluation { z: Complex64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
