use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("reciprocal exponent {name}={value} outside [0, 1]")]
    ExponentOutOfRange { name: &'static str, value: f64 },

    #[error("Lebesgue exponent {name}={value} must lie in [1, inf]")]
    LebesgueOutOfRange { name: &'static str, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("index ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("objective undefined for the zero matrix")]
    ZeroMatrix,

    #[error("no region of the exponent map contains {0:?}")]
    CoverageViolation([f64; 4]),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Dirichlet lower bound fails at x={x}: quotient {quotient} < {bound}")]
    DirichletCheck { x: f64, quotient: f64, bound: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
