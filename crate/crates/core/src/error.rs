use thiserror::Error;

/// Errors raised by constructors and operations with stated preconditions.
///
/// Purely mathematical failures (a rank that is not full, a relation that
/// does not hold) are never errors; they are reported through check results.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation size must be at least 1")]
    InvalidTruncation,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("element {element} outside the domain of {map}")]
    OutsideDomain { element: String, map: String },
    #[error("invalid witness parameters: {0}")]
    InvalidWitness(String),
    #[error("ambient truncation {ambient} too small for weight {weight}")]
    AmbientTooSmall { ambient: usize, weight: usize },
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
