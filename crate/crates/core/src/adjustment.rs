//! Solving for the adjusted level `α'`.
//!
//! The mean coverage `C(α')` of the Clopper-Pearson interval is continuous
//! and strictly decreasing in `α'`, so the level whose mean coverage equals
//! `1 - α` is found by bisection. The lower end of the initial bracket is `α`
//! itself; the upper end is grown until the mean coverage falls below target.

use crate::error::{Error, Result};
use crate::evaluation::mean_coverage_unchecked;
use crate::intervals::{adjusted_cp, Interval, Observation};
use crate::special::{check_level, ShapePair};

/// Largest upper bracket the solver will try.
pub const BRACKET_CAP: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Allowed `|C(α') - (1 - α)|`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Initial upper bracket; `None` means `min(0.5, 20 α)`.
    pub initial_upper: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iterations: 200,
            initial_upper: None,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 0.01) {
            return Err(Error::domain(format!("tolerance {} must lie in (0, 0.01)", self.tol)));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be positive"));
        }
        if let Some(u) = self.initial_upper {
            check_level("initial upper bound", u)?;
        }
        Ok(())
    }
}

/// Outcome of a successful solve.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustmentResult {
    pub alpha_prime: f64,
    pub achieved_mean_coverage: f64,
    /// Number of bisection steps after bracketing.
    pub iterations: usize,
    /// Number of times the upper bracket was doubled.
    pub expansions: usize,
    pub bracket_low: f64,
    pub bracket_high: f64,
    /// Every `(α', C(α'))` pair evaluated, in order.
    pub trace: Vec<(f64, f64)>,
}

/// Which density the mean coverage is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionMode {
    Prior,
    Posterior,
}

/// Adjusted level so that the mean coverage under the `prior` density is
/// `1 - alpha`. Depends on `n` only, not on the observed count.
pub fn solve_prior(alpha: f64, n: u64, prior: ShapePair, config: &SolverConfig) -> Result<AdjustmentResult> {
    check_n(n)?;
    bisect(alpha, config, |a| mean_coverage_unchecked(n, a, prior))
}

/// Adjusted level so that the mean coverage under the posterior
/// `Beta(x + r, n - x + s)` is `1 - alpha`.
pub fn solve_posterior(
    alpha: f64,
    n: u64,
    x: u64,
    prior: ShapePair,
    config: &SolverConfig,
) -> Result<AdjustmentResult> {
    check_n(n)?;
    if x > n {
        return Err(Error::domain(format!("successes {x} exceed trials {n}")));
    }
    // α'(n, X, r, s) = α'(n, n - X, s, r) by reflecting p; solving only the
    // lower half keeps the two bit-identical.
    let posterior = if 2 * x > n {
        ShapePair::new(prior.b(), prior.a())?.posterior(n, n - x)
    } else {
        prior.posterior(n, x)
    };
    bisect(alpha, config, |a| mean_coverage_unchecked(n, a, posterior))
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("number of trials must be positive"))
    } else {
        Ok(())
    }
}

fn bisect(alpha: f64, config: &SolverConfig, coverage: impl Fn(f64) -> f64) -> Result<AdjustmentResult> {
    check_level("alpha", alpha)?;
    config.validate()?;
    let target = 1.0 - alpha;
    let mut trace = Vec::new();
    let mut eval = |a: f64| {
        let c = coverage(a);
        trace.push((a, c));
        c
    };

    let mut low = alpha;
    let at_alpha = eval(low);
    if (at_alpha - target).abs() <= config.tol {
        return Ok(AdjustmentResult {
            alpha_prime: alpha,
            achieved_mean_coverage: at_alpha,
            iterations: 0,
            expansions: 0,
            bracket_low: alpha,
            bracket_high: alpha,
            trace,
        });
    }
    if at_alpha < target {
        return Err(Error::BelowTarget {
            alpha,
            coverage: at_alpha,
            target,
        });
    }

    let mut high = config.initial_upper.unwrap_or((20.0 * alpha).min(0.5));
    if high <= low {
        high = 0.5 * (low + BRACKET_CAP);
    }
    let mut expansions = 0;
    loop {
        let c = eval(high);
        if c < target {
            break;
        }
        if high >= BRACKET_CAP {
            return Err(Error::Unsolvable {
                upper: high,
                coverage: c,
                target,
            });
        }
        low = high;
        high = (2.0 * high).min(BRACKET_CAP);
        expansions += 1;
    }

    let mut mid = 0.5 * (low + high);
    let mut iterations = 0;
    loop {
        let c = eval(mid);
        if (target - c).abs() <= config.tol {
            return Ok(AdjustmentResult {
                alpha_prime: mid,
                achieved_mean_coverage: c,
                iterations,
                expansions,
                bracket_low: low,
                bracket_high: high,
                trace,
            });
        }
        if iterations >= config.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                best: mid,
                residual: (target - c).abs(),
            });
        }
        if c > target {
            low = mid;
        } else {
            high = mid;
        }
        mid = 0.5 * (low + high);
        iterations += 1;
    }
}

/// A coverage-adjusted interval together with the solve that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedInterval {
    pub interval: Interval,
    pub adjustment: AdjustmentResult,
}

/// The mean-coverage corrected `1 - alpha` Clopper-Pearson interval.
pub fn adjusted_interval(
    alpha: f64,
    obs: Observation,
    prior: ShapePair,
    mode: CorrectionMode,
    config: &SolverConfig,
) -> Result<AdjustedInterval> {
    let adjustment = match mode {
        CorrectionMode::Prior => solve_prior(alpha, obs.n(), prior, config)?,
        CorrectionMode::Posterior => solve_posterior(alpha, obs.n(), obs.x(), prior, config)?,
    };
    Ok(AdjustedInterval {
        interval: adjusted_cp(obs, adjustment.alpha_prime)?,
        adjustment,
    })
}
