//! Exact coverage, expected length and mean coverage.
//!
//! Nothing here is simulated. Pointwise quantities enumerate every outcome
//! `X = 0..=n` and weight it by its binomial probability; mean coverage
//! integrates the pointwise coverage against a Beta weight in closed form,
//! as a sum of incomplete-beta differences.

use rayon::prelude::*;

use crate::adjustment::{solve_posterior, solve_prior, SolverConfig};
use crate::error::{Error, Result};
use crate::intervals::{clopper_pearson_unchecked, fixed_level_interval, EstimatorSpec, Interval, Method, Observation};
use crate::special::{
    binomial_pmf, check_level, check_prob, ln_choose, log_beta_unchecked, reg_inc_beta_unchecked, ShapePair,
};

/// Coverage and expected length at one value of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    pub p: f64,
    pub coverage: f64,
    pub expected_length: f64,
}

/// Arguments of the mean-coverage functional.
///
/// Without `conditioning_x` the weight is the prior `Beta(r, s)` itself;
/// with it, the weight is the posterior `Beta(x + r, n - x + s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCoverageQuery {
    pub alpha_prime: f64,
    pub n: u64,
    pub weight: ShapePair,
    pub conditioning_x: Option<u64>,
}

impl MeanCoverageQuery {
    pub fn prior(alpha_prime: f64, n: u64, prior: ShapePair) -> Self {
        Self {
            alpha_prime,
            n,
            weight: prior,
            conditioning_x: None,
        }
    }

    pub fn posterior(alpha_prime: f64, n: u64, x: u64, prior: ShapePair) -> Self {
        Self {
            alpha_prime,
            n,
            weight: prior,
            conditioning_x: Some(x),
        }
    }

    /// Shapes of the density the coverage is averaged against.
    pub fn weight_density(&self) -> ShapePair {
        match self.conditioning_x {
            None => self.weight,
            Some(x) => self.weight.posterior(self.n, x),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("number of trials must be positive"));
        }
        check_level("alpha'", self.alpha_prime)?;
        if let Some(x) = self.conditioning_x {
            if x > self.n {
                return Err(Error::domain(format!("successes {x} exceed trials {}", self.n)));
            }
        }
        Ok(())
    }
}

/// Mean coverage of the `1 - α'` Clopper-Pearson interval with respect to a
/// Beta prior or posterior density.
///
/// With weight density `Beta(u, v)` the contribution of outcome `Y` is
///
/// ```text
/// C(n, Y) β(Y + u, n - Y + v) / β(u, v) · [I_{p_U(Y)} - I_{p_L(Y)}](Y + u, n - Y + v)
/// ```
///
/// since `p^Y (1-p)^(n-Y)` times the weight density is an unnormalised
/// `Beta(Y + u, n - Y + v)` density.
pub fn mean_coverage(query: &MeanCoverageQuery) -> Result<f64> {
    query.validate()?;
    Ok(mean_coverage_unchecked(
        query.n,
        query.alpha_prime,
        query.weight_density(),
    ))
}

pub(crate) fn mean_coverage_unchecked(n: u64, alpha_prime: f64, weight: ShapePair) -> f64 {
    let (u, v) = (weight.a(), weight.b());
    let ln_norm = log_beta_unchecked(u, v);
    (0..=n)
        .map(|y| {
            let ci = clopper_pearson_unchecked(n, y, alpha_prime);
            let a = y as f64 + u;
            let b = (n - y) as f64 + v;
            let mass = reg_inc_beta_unchecked(ci.upper, a, b) - reg_inc_beta_unchecked(ci.lower, a, b);
            (ln_choose(n, y) + log_beta_unchecked(a, b) - ln_norm).exp() * mass
        })
        .sum()
}

/// The intervals a method produces for every outcome `X = 0..=n`, with any
/// adjusted levels already solved.
///
/// Posterior-adjusted methods solve a separate level for each `X`; prior
/// adjusted ones solve once for `n`. Building the table once and reusing it
/// across a grid of `p` values avoids re-solving.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTable {
    n: u64,
    intervals: Vec<Interval>,
    levels: Vec<f64>,
}

impl IntervalTable {
    pub fn build(spec: &EstimatorSpec, n: u64, config: &SolverConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("number of trials must be positive"));
        }
        let alpha = spec.alpha();
        let levels: Vec<f64> = match spec.method {
            Method::AdjustedPrior(prior) => {
                let solved = solve_prior(alpha, n, prior, config)?.alpha_prime;
                vec![solved; n as usize + 1]
            }
            Method::AdjustedPosterior(prior) => (0..=n)
                .into_par_iter()
                .map(|x| solve_posterior(alpha, n, x, prior, config).map(|r| r.alpha_prime))
                .collect::<Result<_>>()?,
            _ => vec![alpha; n as usize + 1],
        };
        let intervals = levels
            .iter()
            .enumerate()
            .map(|(x, &level)| fixed_level_interval(&spec.method, Observation::new(n, x as u64)?, level))
            .collect::<Result<_>>()?;
        Ok(Self { n, intervals, levels })
    }

    /// A table from explicit intervals, one per outcome `0..=n`.
    pub fn from_intervals(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.len() < 2 {
            return Err(Error::domain("need intervals for at least n = 1"));
        }
        let n = intervals.len() as u64 - 1;
        Ok(Self {
            n,
            levels: vec![f64::NAN; intervals.len()],
            intervals,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn interval(&self, x: u64) -> Interval {
        self.intervals[x as usize]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Level the interval for outcome `x` was computed at (`NaN` for tables
    /// built from explicit intervals).
    pub fn level(&self, x: u64) -> f64 {
        self.levels[x as usize]
    }

    /// `P_p(p ∈ I(X))`, summed over all outcomes.
    pub fn coverage(&self, p: f64) -> f64 {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, ci)| ci.contains(p))
            .map(|(x, _)| binomial_pmf(self.n, x as u64, p))
            .sum()
    }

    /// `E_p[U(X) - L(X)]`.
    pub fn expected_length(&self, p: f64) -> f64 {
        self.intervals
            .iter()
            .enumerate()
            .map(|(x, ci)| ci.width() * binomial_pmf(self.n, x as u64, p))
            .sum()
    }

    pub fn point(&self, p: f64) -> CoveragePoint {
        CoveragePoint {
            p,
            coverage: self.coverage(p),
            expected_length: self.expected_length(p),
        }
    }

    pub fn curve(&self, grid: &[f64]) -> Vec<CoveragePoint> {
        grid.iter().map(|&p| self.point(p)).collect()
    }
}

/// Exact coverage probability of a method at `p`.
pub fn exact_coverage(spec: &EstimatorSpec, n: u64, p: f64, config: &SolverConfig) -> Result<f64> {
    check_prob("p", p)?;
    Ok(IntervalTable::build(spec, n, config)?.coverage(p))
}

/// Exact expected interval length of a method at `p`.
pub fn expected_length(spec: &EstimatorSpec, n: u64, p: f64, config: &SolverConfig) -> Result<f64> {
    check_prob("p", p)?;
    Ok(IntervalTable::build(spec, n, config)?.expected_length(p))
}

/// `count` equidistant points from `min` to `max`, both included.
pub fn linear_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { max } else { min + i as f64 * step })
                .collect()
        }
    }
}
