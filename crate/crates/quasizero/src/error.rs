//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain.
    #[error("parameter domain: {0}")]
    ParameterDomain(String),

    /// Rescaling a weight table would push some weight below 1.
    #[error("normalization infeasible: {0}")]
    NormalizationInfeasible(String),

    /// A coefficient sequence does not belong to the class of its weight.
    #[error("class membership: {0}")]
    Membership(String),

    /// A moment sum keeps growing with no admissible tail rule.
    #[error("divergent sum: {0}")]
    Divergence(String),

    /// An iteration budget was exhausted before the scan could finish.
    /// Carries the cumulative value reached at the budget boundary.
    #[error("budget of {budget} evaluations exceeded (H reached {reached:.6e})")]
    BudgetExceeded { budget: u64, reached: f64 },

    /// The requested threshold lies below the infimum of a nonincreasing
    /// sequence; carries the limiting value.
    #[error("threshold {requested:.6e} unreachable; sequence limit {limit:.6e}")]
    UnreachableThreshold { requested: f64, limit: f64 },

    /// Exact integer arithmetic would overflow the guarded range.
    #[error("integer range: {0}")]
    IntegerRange(String),

    /// A contour could not be placed away from all roots.
    #[error("contour degenerate: {0}")]
    ContourDegenerate(String),

    /// Zero counting is undefined for the zero function.
    #[error("undefined count: function is identically zero")]
    UndefinedCount,

    /// The normalized deficiency exponent A is undefined (a zero at the origin).
    #[error("A undefined: {0}")]
    AUndefined(String),

    /// An iterative solver did not converge within its cap.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("descriptor: {0}")]
    Descriptor(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
