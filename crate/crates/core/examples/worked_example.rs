//! Four successes out of 96 trials: the plain, prior-corrected and
//! posterior-corrected 95% intervals.
//!
//!     cargo run --example worked_example

use binomial_ci::adjustment::SolverConfig;
use binomial_ci::intervals::Observation;
use binomial_ci::report::example_report;

fn main() -> binomial_ci::Result<()> {
    let obs = Observation::new(96, 4)?;
    print!("{}", example_report(0.05, obs, &SolverConfig::default(), 4)?);
    Ok(())
}
