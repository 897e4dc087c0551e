mod common;

use binomial_ci::adjustment::SolverConfig;
use binomial_ci::evaluation::{exact_coverage, expected_length, mean_coverage, IntervalTable, MeanCoverageQuery};
use binomial_ci::intervals::{clopper_pearson, wald, wilson, EstimatorSpec, Interval, Method, Observation};
use binomial_ci::special::{beta_quantile, reg_inc_beta, ShapePair};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{integrate_smoothed, monte_carlo, quadrature_mean_coverage, within_3se};

// Extended-precision evaluations of the displayed formulas (40 digits).
#[test]
fn wald_and_wilson_match_high_precision() {
    let obs = Observation::new(96, 4).unwrap();
    let w = wald(obs, 0.05).unwrap();
    assert!((w.lower - 0.001693813267178976).abs() < 1e-14);
    assert!((w.upper - 0.08163952006615436).abs() < 1e-14);
    let s = wilson(obs, 0.05).unwrap();
    assert!((s.lower - 0.01632070753628832).abs() < 1e-14);
    assert!((s.upper - 0.10228191466658106).abs() < 1e-14);
}

#[test]
fn wilson_metrics_match_monte_carlo() {
    let spec = EstimatorSpec::new(Method::Wilson, 0.05).unwrap();
    let table = IntervalTable::build(&spec, 25, &SolverConfig::default()).unwrap();
    let mut rng = StdRng::seed_from_u64(25);
    let mc = monte_carlo(table.intervals(), 0.2, 1_000_000, &mut rng);
    let cov = exact_coverage(&spec, 25, 0.2, &SolverConfig::default()).unwrap();
    let len = expected_length(&spec, 25, 0.2, &SolverConfig::default()).unwrap();
    assert!(within_3se(cov, mc.coverage, mc.coverage_se), "{cov} vs {}", mc.coverage);
    assert!(within_3se(len, mc.length, mc.length_se), "{len} vs {}", mc.length);
}

#[test]
fn incomplete_beta_matches_density_quadrature() {
    for (x, a, b) in [(0.3, 4.0, 17.0), (0.9, 0.5, 0.5), (0.05, 2.5, 40.0), (0.6, 30.0, 20.0)] {
        let quad = integrate_smoothed(|t| common::beta_pdf(t, a, b), 0.0, x, 1e-14);
        let got = reg_inc_beta(x, a, b).unwrap();
        assert!((got - quad).abs() < 1e-11, "I_{x}({a},{b}) = {got} vs {quad}");
    }
}

#[test]
fn mean_coverage_matches_quadrature_for_golden_queries() {
    for (alpha_prime, n, x, prior) in [
        (0.0931, 25, None, ShapePair::uniform()),
        (0.0237, 20, None, ShapePair::uniform()),
        (0.09385, 96, Some(4), ShapePair::jeffreys()),
        (0.2, 7, Some(0), ShapePair::symmetric(2.0).unwrap()),
    ] {
        let query = match x {
            None => MeanCoverageQuery::prior(alpha_prime, n, prior),
            Some(x) => MeanCoverageQuery::posterior(alpha_prime, n, x, prior),
        };
        let intervals: Vec<Interval> = (0..=n)
            .map(|y| clopper_pearson(Observation::new(n, y).unwrap(), alpha_prime).unwrap())
            .collect();
        let w = query.weight_density();
        let quad = quadrature_mean_coverage(&intervals, w.a(), w.b());
        let closed = mean_coverage(&query).unwrap();
        assert!((closed - quad).abs() < 1e-8, "{query:?}: {closed} vs {quad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn incomplete_beta_reflection(x in 0.0f64..=1.0, a in 0.05f64..200.0, b in 0.05f64..200.0) {
        let s = reg_inc_beta(x, a, b).unwrap() + reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12, "sum {s}");
    }

    #[test]
    fn quantile_roundtrip(q in 1e-6f64..(1.0 - 1e-6), a in 0.5f64..100.0, b in 0.5f64..100.0) {
        let x = beta_quantile(q, a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
        let back = reg_inc_beta(x, a, b).unwrap();
        // Near x = 1 the spacing of f64 limits what any x can achieve.
        let slack = 1e-10 + 4.0 * f64::EPSILON * common::beta_pdf(x, a, b).max(1.0);
        prop_assert!((back - q).abs() <= slack, "q={q} x={x} back={back}");
    }

    #[test]
    fn intervals_are_nested_in_level(n in 1u64..120, frac in 0.0f64..=1.0, a1 in 0.001f64..0.5, a2 in 0.001f64..0.5) {
        let x = (frac * n as f64).round() as u64;
        let obs = Observation::new(n, x).unwrap();
        let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        let wide = clopper_pearson(obs, lo).unwrap();
        let narrow = clopper_pearson(obs, hi).unwrap();
        prop_assert!(wide.contains_interval(&narrow));
    }
}
