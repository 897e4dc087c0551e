//! Solving for the adjusted level, with the bisection trace.
//!
//!     cargo run --example solve_level -- 50 0.05

use binomial_ci::adjustment::{solve_posterior, solve_prior, SolverConfig};
use binomial_ci::special::ShapePair;

fn main() -> binomial_ci::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map_or(50, |s| s.parse().unwrap());
    let alpha = args.get(1).map_or(0.05, |s| s.parse().unwrap());
    let cfg = SolverConfig::default();

    let r = solve_prior(alpha, n, ShapePair::uniform(), &cfg)?;
    println!(
        "prior Beta(1,1): alpha' = {:.8}, C = {:.10}, {} expansions, {} bisections",
        r.alpha_prime, r.achieved_mean_coverage, r.expansions, r.iterations
    );
    for (a, c) in r.trace.iter().take(8) {
        println!("  alpha' = {a:.8}  C = {c:.10}");
    }
    println!("  ... {} evaluations in total", r.trace.len());

    println!("posterior Beta(1/2,1/2), per observed X:");
    for x in [0, 1, n / 10, n / 4, n / 2] {
        let r = solve_posterior(alpha, n, x, ShapePair::jeffreys(), &cfg)?;
        println!("  X = {x:>3}: alpha' = {:.6}", r.alpha_prime);
    }
    Ok(())
}
