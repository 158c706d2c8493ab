use thiserror::Error;

/// Errors surfaced by the arithmetic, search and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("factorization of {n} exceeded the configured effort")]
    FactorizationTimeout { n: u128 },

    #[error("{n} is not a Loeschian number")]
    NotLoeschian { n: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search exhausted its bound of {bound} without a witness")]
    Exhausted { bound: u64 },

    #[error("quadratic form ({a}, {b}, {c}) is not definite")]
    NotDefinite { a: String, b: String, c: String },

    #[error("continued fraction of sqrt({n}) did not close within {steps} steps")]
    PellPeriodExceeded { n: u128, steps: u64 },

    #[error("element has zero reduced norm and is not invertible")]
    NotInvertible,

    #[error("elements live in different algebras (d = {left} vs d = {right})")]
    AlgebraMismatch { left: u64, right: u64 },

    #[error("order-3 equation violated: {0}")]
    EquationViolated(String),

    #[error("intertwiner space has dimension {dim}, expected 2")]
    DegenerateIntertwiner { dim: usize },

    #[error("element does not lie in the order: {0}")]
    NotInOrder(String),

    #[error("class count {found} disagrees with the closed formula {expected} for d = {d}")]
    FormulaMismatch { d: u64, found: u64, expected: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
