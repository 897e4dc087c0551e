//! Every interval construction for one observation.
//!
//!     cargo run --example intervals -- 20 1 0.05

use binomial_ci::adjustment::{adjusted_interval, CorrectionMode, SolverConfig};
use binomial_ci::intervals::{bayes_beta, clopper_pearson, wald, wilson, Observation};
use binomial_ci::special::ShapePair;

fn main() -> binomial_ci::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map_or(20, |s| s.parse().unwrap());
    let x = args.get(1).map_or(1, |s| s.parse().unwrap());
    let alpha = args.get(2).map_or(0.05, |s| s.parse().unwrap());
    let obs = Observation::new(n, x)?;
    let cfg = SolverConfig::default();

    println!("n = {n}, X = {x}, alpha = {alpha}");
    println!("{:<28} {}", "Wald", wald(obs, alpha)?);
    println!("{:<28} {}", "Wilson", wilson(obs, alpha)?);
    println!("{:<28} {}", "Clopper-Pearson", clopper_pearson(obs, alpha)?);
    println!("{:<28} {}", "Jeffreys", bayes_beta(obs, alpha, ShapePair::jeffreys())?);
    for (name, prior, mode) in [
        ("prior Beta(1,1) adjusted", ShapePair::uniform(), CorrectionMode::Prior),
        (
            "posterior Beta(1/2,1/2) adj.",
            ShapePair::jeffreys(),
            CorrectionMode::Posterior,
        ),
    ] {
        let adj = adjusted_interval(alpha, obs, prior, mode, &cfg)?;
        println!(
            "{name:<28} {}  alpha' = {:.5}",
            adj.interval, adj.adjustment.alpha_prime
        );
    }
    Ok(())
}
