use thiserror::Error;

/// Errors produced by the interval library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The mean coverage never dropped below the target before the bracket cap.
    #[error(
        "cannot bracket adjusted level: mean coverage at alpha' = {upper} is {coverage}, still above target {target}"
    )]
    Unsolvable { upper: f64, coverage: f64, target: f64 },

    /// The mean coverage at the nominal level is already below the target.
    #[error("mean coverage at nominal alpha = {alpha} is {coverage}, already below target {target}")]
    BelowTarget { alpha: f64, coverage: f64, target: f64 },

    /// Bisection ran out of iterations.
    #[error("bisection did not converge after {iterations} iterations (best alpha' = {best}, |error| = {residual:e})")]
    NoConvergence {
        iterations: usize,
        best: f64,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors raised by the adjusted-level solver rather than by
    /// invalid arguments.
    pub fn is_solver_failure(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
