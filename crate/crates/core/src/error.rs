use thiserror::Error;

/// Errors produced by the geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("realified coordinates must have even length, got {0}")]
    OddLength(usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("hermiticity violated (deviation {0:e})")]
    NotHermitian(f64),

    #[error("anti-hermiticity violated (deviation {0:e})")]
    NotAntiHermitian(f64),

    #[error("trace violated: expected 1, got {0}")]
    InvalidTrace(f64),

    #[error("positivity violated (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("vector is zero")]
    ZeroVector,

    #[error("not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("function vanishes at the evaluation point; homogeneity degree undefined")]
    UndefinedDegree,

    #[error("tangency violated: v·x = {0:e}")]
    NotTangent(f64),

    #[error("Bloch vector outside the unit ball (norm {0})")]
    OutsideBall(f64),

    #[error("singular at the origin")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
