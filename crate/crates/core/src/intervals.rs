//! Interval constructions for a binomial proportion.

use std::fmt;

use crate::error::{Error, Result};
use crate::special::{beta_quantile_unchecked, check_level, check_prob, std_normal_quantile, ShapePair};

/// A closed interval `[lower, upper]` inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        check_prob("lower", lower)?;
        check_prob("upper", upper)?;
        if lower > upper {
            return Err(Error::domain(format!("lower {lower} exceeds upper {upper}")));
        }
        Ok(Self { lower, upper })
    }

    /// The whole parameter space `[0, 1]`.
    pub fn full() -> Self {
        Self { lower: 0.0, upper: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval membership.
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }

    /// The interval `(1 - upper, 1 - lower)`.
    pub fn reflect(&self) -> Self {
        Self {
            lower: 1.0 - self.upper,
            upper: 1.0 - self.lower,
        }
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        write!(f, "({:.*}, {:.*})", prec, self.lower, prec, self.upper)
    }
}

/// `x` successes observed in `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observation {
    n: u64,
    x: u64,
}

impl Observation {
    pub fn new(n: u64, x: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("number of trials must be positive"));
        }
        if x > n {
            return Err(Error::domain(format!("successes {x} exceed trials {n}")));
        }
        Ok(Self { n, x })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// Sample proportion `x / n`.
    pub fn proportion(&self) -> f64 {
        self.x as f64 / self.n as f64
    }

    /// The observation with successes and failures swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            n: self.n,
            x: self.n - self.x,
        }
    }
}

/// The interval construction to use.
///
/// Methods that need a Beta weight carry it, so a spec can never be missing
/// its prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Wald,
    Wilson,
    ClopperPearson,
    /// Equal-tailed posterior interval; Jeffreys with `Beta(1/2, 1/2)`.
    BayesBeta(ShapePair),
    /// Clopper-Pearson at a level calibrated to mean coverage under a prior.
    AdjustedPrior(ShapePair),
    /// Clopper-Pearson at a level calibrated to mean coverage under the
    /// posterior given the observed count.
    AdjustedPosterior(ShapePair),
}

impl Method {
    pub fn prior(&self) -> Option<ShapePair> {
        match self {
            Method::Wald | Method::Wilson | Method::ClopperPearson => None,
            Method::BayesBeta(s) | Method::AdjustedPrior(s) | Method::AdjustedPosterior(s) => Some(*s),
        }
    }

    /// Short stable identifier used in CSV output.
    pub fn label(&self) -> String {
        match self {
            Method::Wald => "wald".into(),
            Method::Wilson => "wilson".into(),
            Method::ClopperPearson => "cp".into(),
            Method::BayesBeta(s) => format!("bayes({},{})", s.a(), s.b()),
            Method::AdjustedPrior(s) => format!("adjusted-prior({},{})", s.a(), s.b()),
            Method::AdjustedPosterior(s) => format!("adjusted-posterior({},{})", s.a(), s.b()),
        }
    }

    pub fn is_adjusted(&self) -> bool {
        matches!(self, Method::AdjustedPrior(_) | Method::AdjustedPosterior(_))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A method together with its nominal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSpec {
    pub method: Method,
    alpha: f64,
}

impl EstimatorSpec {
    pub fn new(method: Method, alpha: f64) -> Result<Self> {
        check_level("alpha", alpha)?;
        Ok(Self { method, alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `z_{α/2}`, the upper α/2 point of the standard normal.
fn z_half(alpha: f64) -> Result<f64> {
    check_level("alpha", alpha)?;
    std_normal_quantile(1.0 - alpha / 2.0)
}

/// Wald interval `p̂ ± z √(p̂ q̂ / n)`, clamped to `[0, 1]`.
pub fn wald(obs: Observation, alpha: f64) -> Result<Interval> {
    let z = z_half(alpha)?;
    let p = obs.proportion();
    let half = z * (p * (1.0 - p) / obs.n as f64).sqrt();
    Ok(Interval {
        lower: (p - half).clamp(0.0, 1.0),
        upper: (p + half).clamp(0.0, 1.0),
    })
}

/// Wilson score interval.
pub fn wilson(obs: Observation, alpha: f64) -> Result<Interval> {
    let z = z_half(alpha)?;
    let z2 = z * z;
    let n = obs.n as f64;
    let p = obs.proportion();
    let denom = n + z2;
    let center = (obs.x as f64 + z2 / 2.0) / denom;
    let half = z / denom * (p * (1.0 - p) * n + z2 / 4.0).sqrt();
    // At x = 0 (x = n) the half-width equals the offset of the centre
    // analytically; pin the endpoint so rounding cannot leave it off 0 (1).
    let lower = if obs.x == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if obs.x == obs.n { 1.0 } else { (center + half).min(1.0) };
    Ok(Interval { lower, upper })
}

/// Clopper-Pearson interval
/// `(B(α/2; x, n-x+1), B(1-α/2; x+1, n-x))`, with `lower = 0` at `x = 0` and
/// `upper = 1` at `x = n`.
pub fn clopper_pearson(obs: Observation, alpha: f64) -> Result<Interval> {
    check_level("alpha", alpha)?;
    Ok(clopper_pearson_unchecked(obs.n, obs.x, alpha))
}

pub(crate) fn clopper_pearson_unchecked(n: u64, x: u64, alpha: f64) -> Interval {
    let half = alpha / 2.0;
    let lower = if x == 0 {
        0.0
    } else {
        beta_quantile_unchecked(half, x as f64, (n - x + 1) as f64)
    };
    let upper = if x == n {
        1.0
    } else {
        // B(1 - α/2; x+1, n-x) = 1 - B(α/2; n-x, x+1), solved in the lower tail
        // so mirrored observations give exactly mirrored endpoints.
        1.0 - beta_quantile_unchecked(half, (n - x) as f64, (x + 1) as f64)
    };
    Interval { lower, upper }
}

/// Equal-tailed Bayesian interval under a `Beta(r, s)` prior.
pub fn bayes_beta(obs: Observation, alpha: f64, prior: ShapePair) -> Result<Interval> {
    check_level("alpha", alpha)?;
    let post = prior.posterior(obs.n, obs.x);
    let half = alpha / 2.0;
    Ok(Interval {
        lower: beta_quantile_unchecked(half, post.a(), post.b()),
        upper: 1.0 - beta_quantile_unchecked(half, post.b(), post.a()),
    })
}

/// Clopper-Pearson interval at an already-solved adjusted level `α'`.
pub fn adjusted_cp(obs: Observation, alpha_prime: f64) -> Result<Interval> {
    clopper_pearson(obs, alpha_prime)
}

/// Interval for the non-adjusted methods. Adjusted methods need a solved level
/// and are handled in [`crate::adjustment`].
pub(crate) fn fixed_level_interval(method: &Method, obs: Observation, alpha: f64) -> Result<Interval> {
    match method {
        Method::Wald => wald(obs, alpha),
        Method::Wilson => wilson(obs, alpha),
        Method::ClopperPearson | Method::AdjustedPrior(_) | Method::AdjustedPosterior(_) => clopper_pearson(obs, alpha),
        Method::BayesBeta(prior) => bayes_beta(obs, alpha, *prior),
    }
}
