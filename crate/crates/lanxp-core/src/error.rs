//! Error type shared by every numeric operation in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Gamma-type pole: the argument hit a non-positive integer.
    #[error("pole at non-positive integer argument ({re}, {im})")]
    Pole { re: f64, im: f64 },

    /// A result (or an unavoidable intermediate) exceeds the representable range.
    #[error("overflow in {what}")]
    Overflow { what: &'static str },

    /// A series or iteration hit its term/step budget before meeting its tail bound.
    #[error("{what} did not converge within {budget} steps")]
    NonConvergence { what: &'static str, budget: usize },

    /// Argument outside the operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested height exceeds the configured desk ceiling for zeta work.
    #[error("height {e} exceeds desk ceiling {ceiling}")]
    CeilingExceeded { e: f64, ceiling: f64 },

    /// The argument-tracking path ran into a zero of zeta.
    #[error("zeta vanishes near sigma = {sigma}, E = {e}; fluctuation undefined this close to a zero")]
    ZeroProximity { sigma: f64, e: f64 },

    /// Sign-change counting could not be stabilized against the smooth+fluctuation count.
    #[error("zero count did not stabilize: scan says {scanned}, smooth+fluctuation says {expected}")]
    RefinementFailure { scanned: usize, expected: i64 },

    /// Root bracketing failed (monotonicity violated or target out of band).
    #[error("bracketing failure: {0}")]
    Bracketing(String),

    /// Adaptive integrator drove the step below the useful resolution.
    #[error("step underflow at t = {t} (state too stiff or escaping)")]
    StepUnderflow { t: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge (best error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },

    /// A trajectory left the allowed region before the requested horizon.
    #[error("orbit left the allowed region at t = {t}")]
    NonClosure { t: f64 },

    /// Evaluation at a point where the operation is singular.
    #[error("singular argument: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
