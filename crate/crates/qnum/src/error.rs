use thiserror::Error;

/// Errors produced by network construction, measure analysis and solving.
#[derive(Debug, Error)]
pub enum Error {
    /// Scenario or model data failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point violates the feasible region of the transformed problem.
    #[error("infeasible point: {0}")]
    Infeasible(String),

    /// A measure is identically zero almost everywhere on [0, 1].
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    /// The log-measure second derivative changes sign more than once.
    #[error("non-unique inflection point: {0}")]
    NonUniqueInflection(String),

    /// The curvature-condition denominator u*F'' + F' lost positivity.
    #[error("condition-2 denominator not positive at u = {u}: {denominator}")]
    Cond2Denominator { u: f64, denominator: f64 },

    /// Instance too large for the requested operation.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// The solver produced non-finite values or exhausted its iteration budget.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
