use thiserror::Error;

/// Errors raised by the calculus. Verification failures are not errors:
/// harnesses report them as data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truth value {0} outside [0,1]")]
    Domain(f64),

    #[error("space mismatch: expected `{expected}`, found `{found}`")]
    SpaceMismatch { expected: String, found: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("category mismatch: {0} vs {1}")]
    CategoryMismatch(String, String),

    #[error("space `{0}` is not a product space")]
    NotAProduct(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("row {row} is not normed (sup = {sup})")]
    NotNormed { row: usize, sup: f64 },

    #[error("row {row} is not a probability vector: {reason}")]
    NotStochastic { row: usize, reason: String },

    #[error("row {0} of a multivalued map is empty")]
    EmptyRow(usize),

    #[error("matrix is not symmetric positive semidefinite: {0}")]
    NotPsd(String),

    #[error("unknown element `{element}` in space `{space}`")]
    UnknownElement { space: String, element: String },

    #[error("budget exceeded: {needed} candidates > budget {budget}")]
    BudgetExceeded { needed: f64, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
