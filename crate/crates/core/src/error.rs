use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuresError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("{name} = {value} is outside [{lower}, {upper}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("expected {expected} angles, got {got}")]
    WrongAngleCount { expected: usize, got: usize },

    #[error("generator index {index} out of range 1..={max}")]
    InvalidIndex { index: usize, max: usize },

    #[error("envelope violated: density {density:e} exceeds envelope {envelope:e}")]
    EnvelopeViolation { density: f64, envelope: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, BuresError>;
