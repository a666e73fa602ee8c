//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("separation is undefined for fewer than two nodes")]
    NotEnoughNodes,

    #[error("node cardinality {requested} exceeds cap {cap}")]
    CardinalityCap { requested: usize, cap: usize },

    #[error("explicit matrix has {entries} entries, exceeding cap {cap}; use the Gram path")]
    ExplicitCap { entries: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node generation infeasible: {0}")]
    Infeasible(String),

    #[error("dart throwing exhausted {attempts} attempts without reaching separation {q_target}")]
    GenerationFailed { attempts: usize, q_target: f64 },

    #[error("eigensolver failed to converge within {max_iterations} iterations")]
    EigensolverFailed { max_iterations: usize },

    #[error("node separation {q} is below the support half-width {h}; identity hypothesis fails")]
    SeparationBelowSupport { q: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
