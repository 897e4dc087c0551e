//! Mean coverage of the Clopper-Pearson interval as a function of its level,
//! under a few Beta weights. It decreases steadily in alpha'.
//!
//!     cargo run --example mean_coverage

use binomial_ci::evaluation::{mean_coverage, MeanCoverageQuery};
use binomial_ci::special::ShapePair;

fn main() -> binomial_ci::Result<()> {
    let n = 25;
    let levels = [0.01, 0.02, 0.05, 0.0931, 0.15, 0.25, 0.5];
    print!("{:<14}", "alpha'");
    for a in levels {
        print!("{a:>9}");
    }
    println!();
    for r in [0.5, 1.0, 2.0] {
        let prior = ShapePair::symmetric(r)?;
        print!("{:<14}", prior.to_string());
        for a in levels {
            print!("{:>9.5}", mean_coverage(&MeanCoverageQuery::prior(a, n, prior))?);
        }
        println!();
    }
    // Conditioning on the data: posterior weight after 4 successes in 96.
    let q = MeanCoverageQuery::posterior(0.09385, 96, 4, ShapePair::jeffreys());
    println!("posterior n=96 X=4, alpha'=0.09385: {:.6}", mean_coverage(&q)?);
    Ok(())
}
