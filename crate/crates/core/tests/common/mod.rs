//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's special functions: densities and pmfs go
//! through `libm::lgamma`, integrals through adaptive Gauss-Kronrod, and
//! sampling through `rand_distr`.
#![allow(dead_code, clippy::excessive_precision)]

use binomial_ci::intervals::Interval;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

pub fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

pub fn beta_pdf(p: f64, a: f64, b: f64) -> f64 {
    beta_pdf_pq(p, 1.0 - p, a, b)
}

/// Density with `q = 1 - p` supplied separately, so it keeps full relative
/// precision near `p = 1`.
pub fn beta_pdf_pq(p: f64, q: f64, a: f64, b: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        return 0.0;
    }
    ((a - 1.0) * p.ln() + (b - 1.0) * q.ln() - ln_beta(a, b)).exp()
}

pub fn binom_pmf(n: u64, k: u64, p: f64) -> f64 {
    binom_pmf_pq(n, k, p, 1.0 - p)
}

pub fn binom_pmf_pq(n: u64, k: u64, p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q <= 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (n, k) = (n as f64, k as f64);
    let ln_c = libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0);
    (ln_c + k * p.ln() + (n - k) * q.ln()).exp()
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod 7/15 to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        // Below ~1e-16 the error estimate is rounding noise.
        if err <= tol.max(1e-17) || err <= 1e-14 * v.abs() || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    rec(&f, a, b, tol, 30)
}

/// Integral over `[a, b]` after `p = a + (b - a)(3t² - 2t³)`, which tames
/// integrable `x^(-1/2)` endpoint singularities.
pub fn integrate_smoothed(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    integrate_smoothed_pq(|p, _| f(p), a, b, tol)
}

/// As `integrate_smoothed`, but `f` also gets `1 - p` computed without
/// cancellation.
pub fn integrate_smoothed_pq(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let w = b - a;
    integrate(
        |t| {
            let s = 1.0 - t;
            let p = a + w * t * t * (3.0 - 2.0 * t);
            let q = (1.0 - b) + w * s * s * (1.0 + 2.0 * t);
            f(p, q) * 6.0 * t * s * w
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫ f(p) Σ_X 1(p ∈ I_X) P_p(X) dp` over (0, 1), split at every interval
/// endpoint so the indicator is constant on each piece.
pub fn quadrature_mean_coverage(intervals: &[Interval], u: f64, v: f64) -> f64 {
    let n = intervals.len() as u64 - 1;
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for ci in intervals {
        cuts.push(ci.lower);
        cuts.push(ci.upper);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let integrand = |p: f64, q: f64| {
        let cover: f64 = intervals
            .iter()
            .enumerate()
            .filter(|(_, ci)| ci.lower <= p && p <= ci.upper)
            .map(|(x, _)| binom_pmf_pq(n, x as u64, p, q))
            .sum();
        cover * beta_pdf_pq(p, q, u, v)
    };
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| integrate_smoothed_pq(integrand, w[0], w[1], 1e-13))
        .sum()
}

/// Coverage and expected length by direct summation with the oracle pmf.
pub fn direct_metrics(intervals: &[Interval], p: f64) -> (f64, f64) {
    let n = intervals.len() as u64 - 1;
    let mut cov = 0.0;
    let mut len = 0.0;
    for (x, ci) in intervals.iter().enumerate() {
        let w = binom_pmf(n, x as u64, p);
        if ci.lower <= p && p <= ci.upper {
            cov += w;
        }
        len += w * (ci.upper - ci.lower);
    }
    (cov, len)
}

pub struct McEstimate {
    pub coverage: f64,
    pub coverage_se: f64,
    pub length: f64,
    pub length_se: f64,
}

/// Simulate `reps` draws of `X ~ Bin(n, p)` and look up the interval for each.
pub fn monte_carlo(intervals: &[Interval], p: f64, reps: usize, rng: &mut impl Rng) -> McEstimate {
    let n = intervals.len() as u64 - 1;
    let dist = Binomial::new(n, p).unwrap();
    let mut hits = 0usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let ci = intervals[dist.sample(rng) as usize];
        if ci.lower <= p && p <= ci.upper {
            hits += 1;
        }
        let w = ci.upper - ci.lower;
        sum += w;
        sum_sq += w * w;
    }
    let r = reps as f64;
    let coverage = hits as f64 / r;
    let length = sum / r;
    let var = (sum_sq / r - length * length).max(0.0);
    McEstimate {
        coverage,
        coverage_se: (coverage * (1.0 - coverage) / r).sqrt(),
        length,
        length_se: (var / r).sqrt(),
    }
}

/// `|a - b| <= 3 SE`, with a floor for estimates whose SE is zero.
pub fn within_3se(exact: f64, estimate: f64, se: f64) -> bool {
    (exact - estimate).abs() <= 3.0 * se + 1e-12
}

/// Round to `decimals` places, then allow one unit in the last place.
pub fn matches_printed(value: f64, printed: f64, decimals: i32) -> bool {
    let scale = 10f64.powi(decimals);
    ((value * scale).round() - (printed * scale).round()).abs() <= 1.0
}
