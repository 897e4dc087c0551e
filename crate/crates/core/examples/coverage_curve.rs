//! Exact coverage and expected length over a grid of p.
//!
//!     cargo run --example coverage_curve

use binomial_ci::adjustment::SolverConfig;
use binomial_ci::evaluation::{linear_grid, IntervalTable};
use binomial_ci::intervals::{EstimatorSpec, Method};
use binomial_ci::special::ShapePair;

fn main() -> binomial_ci::Result<()> {
    let n = 25;
    let grid = linear_grid(0.001, 0.999, 2000);
    let cfg = SolverConfig::default();
    println!("n = {n}, nominal 95%, {} values of p", grid.len());
    println!(
        "{:<28} {:>10} {:>10} {:>12}",
        "method", "min cov", "mean cov", "mean length"
    );
    for method in [
        Method::Wald,
        Method::Wilson,
        Method::ClopperPearson,
        Method::BayesBeta(ShapePair::jeffreys()),
        Method::AdjustedPrior(ShapePair::uniform()),
        Method::AdjustedPosterior(ShapePair::jeffreys()),
    ] {
        let table = IntervalTable::build(&EstimatorSpec::new(method, 0.05)?, n, &cfg)?;
        let curve = table.curve(&grid);
        let min = curve.iter().map(|c| c.coverage).fold(f64::INFINITY, f64::min);
        let mean = curve.iter().map(|c| c.coverage).sum::<f64>() / curve.len() as f64;
        let len = curve.iter().map(|c| c.expected_length).sum::<f64>() / curve.len() as f64;
        println!("{:<28} {min:>10.4} {mean:>10.4} {len:>12.4}", method.label());
    }
    Ok(())
}
