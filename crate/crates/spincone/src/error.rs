//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A denominator vanished during evaluation.
    #[error("division by zero: denominator vanishes at the evaluation point")]
    DivisionByZero,

    /// A rewrite-rule set kept producing reducible occurrences past the
    /// degree bound, so it cannot terminate.
    #[error("rewrite system does not terminate (degree bound {bound} exceeded)")]
    NonTerminating { bound: usize },

    /// Wedging two forms whose degrees sum past the top degree 8.
    #[error("wedge product of degrees {lhs} and {rhs} exceeds the top degree 8")]
    DegreeOverflow { lhs: usize, rhs: usize },

    /// `ext_d` applied to a form whose coefficients already contain
    /// derivative symbols; the chain rule is single-use.
    #[error("exterior derivative of a form whose coefficients contain derivative symbols")]
    DerivativeSymbolPresent,

    /// The linear system extracted from dΦ = 0 is degenerate.
    #[error("linear system for the derivative symbols is singular: {0}")]
    SingularSystem(String),

    /// An ansatz reduction left a nonzero residual.
    #[error("ansatz reduction failed, residual {residual} in {context}")]
    ReductionFailure { context: String, residual: String },

    /// A metric function is too close to zero to evaluate the right-hand sides.
    #[error("singular denominator: |{symbol}| = {value:e} below 1e-14")]
    SingularDenominator { symbol: &'static str, value: f64 },

    /// The adaptive integrator drove the step size below resolution.
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    /// Seed parameters outside their admissible range.
    #[error("invalid seed specification: {0}")]
    InvalidSpec(String),

    /// A closed-form family evaluation outside its domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A trajectory sample broke the fixed-sign convention.
    #[error("sign convention violated at t = {t:e}: {detail}")]
    SignConvention { t: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
