use thiserror::Error;

/// Errors raised by the spin tomography library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("spin index out of range: {0}")]
    Index(String),
    #[error("direction is not a unit vector (norm {0})")]
    NonUnitDirection(f64),
    #[error("non-finite angle")]
    NonFiniteAngle,
    #[error("grid too coarse: {what} = {got}, minimum {min}")]
    CoarseGrid {
        what: &'static str,
        got: usize,
        min: usize,
    },
    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("singular frame operator")]
    SingularFrame,
    #[error("malformed matrix JSON: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
