//! Win/lose/tie heatmap of expected length: Wilson (A) against the prior
//! corrected interval (B). Writes heatmap.svg and heatmap.csv.
//!
//!     cargo run --release --example heatmap -- /tmp/heatmap.svg

use std::path::PathBuf;

use binomial_ci::adjustment::SolverConfig;
use binomial_ci::intervals::{EstimatorSpec, Method};
use binomial_ci::report::{heatmap, write_atomic, Metric, ReportConfig, Verdict};
use binomial_ci::special::ShapePair;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("heatmap.svg"), PathBuf::from);
    let a = EstimatorSpec::new(Method::Wilson, 0.05)?;
    let b = EstimatorSpec::new(Method::AdjustedPrior(ShapePair::uniform()), 0.05)?;
    let report = ReportConfig {
        n_list: (5..=60).collect(),
        p_grid_count: 200,
        ..ReportConfig::default()
    };
    let map = heatmap(&a, &b, Metric::Length, &report, &SolverConfig::default())?;
    write_atomic(&out, &map.to_svg())?;
    write_atomic(&out.with_extension("csv"), &map.to_csv())?;
    println!(
        "{} cells: A shorter {}, B shorter {}, tie {} -> {}",
        map.cells.len(),
        map.count(Verdict::AWins),
        map.count(Verdict::BWins),
        map.count(Verdict::Tie),
        out.display()
    );
    Ok(())
}
