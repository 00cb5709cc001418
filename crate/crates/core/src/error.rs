use thiserror::Error;

/// Errors raised by the construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands that must agree in shape (length, degree, dimension) do not.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An index lies outside the range of valid coordinates.
    #[error("index {index} out of range (expected < {bound})")]
    OutOfRange { index: u128, bound: String },

    /// Degree 0 leaves no monomial with a variable factor.
    #[error("degree must be at least 1 to build the matrix")]
    EmptyMatrix,

    /// The requested dimensions do not fit in machine-sized indices.
    #[error("dimensions too large: {0}")]
    TooLarge(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    /// The all-zero vector does not name a projective point.
    #[error("invalid point: all coordinates are zero")]
    ZeroPoint,

    /// Every pure-power coordinate vanishes, so the point lies on no chart.
    #[error("no chart: every pure-power coordinate is zero")]
    NoChart,

    #[error("point is not on the variety: {0}")]
    NotOnVariety(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A brute-force run would exceed the configured work budget.
    #[error("budget exceeded: {required} membership tests required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
