//! Adjusted levels for the prior Beta(1, 1) correction over the standard
//! grid of n, as CSV on stdout.
//!
//!     cargo run --release --example alpha_table

use binomial_ci::adjustment::SolverConfig;
use binomial_ci::report::{alpha_table, alpha_table_csv, TABLE_ALPHAS, TABLE_NS};
use binomial_ci::special::ShapePair;

fn main() -> binomial_ci::Result<()> {
    let rows = alpha_table(&TABLE_ALPHAS, &TABLE_NS, ShapePair::uniform(), &SolverConfig::default())?;
    print!("{}", alpha_table_csv(&rows));
    Ok(())
}
