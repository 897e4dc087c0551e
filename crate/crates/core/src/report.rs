//! Tables, curves and comparison heatmaps, rendered as CSV or SVG.
//!
//! All numbers are printed fixed-point with a fixed number of decimals so
//! that identical inputs give byte-identical output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::adjustment::{adjusted_interval, solve_prior, CorrectionMode, SolverConfig};
use crate::error::{Error, Result};
use crate::evaluation::{linear_grid, IntervalTable};
use crate::intervals::{clopper_pearson, EstimatorSpec, Observation};
use crate::special::ShapePair;

/// The `n` values of the standard table of adjusted levels.
pub const TABLE_NS: [u64; 30] = [
    5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100, 110, 120, 130, 140, 150, 160, 170,
    180, 190, 200,
];

/// Nominal levels of the standard table.
pub const TABLE_ALPHAS: [f64; 2] = [0.05, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

/// Grid and formatting options shared by curves and heatmaps.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub p_grid_count: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub n_list: Vec<u64>,
    pub decimals_for_tie: u32,
    pub output_format: OutputFormat,
    /// Worker threads for grid sweeps; `None` uses rayon's default.
    pub workers: Option<usize>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            p_grid_count: 500,
            p_min: 0.001,
            p_max: 0.5,
            n_list: (5..=100).collect(),
            decimals_for_tie: 3,
            output_format: OutputFormat::Csv,
            workers: None,
        }
    }
}

impl ReportConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_grid_count < 2 {
            return Err(Error::domain("p grid needs at least 2 points"));
        }
        if !(0.0 <= self.p_min && self.p_min < self.p_max && self.p_max <= 1.0) {
            return Err(Error::domain(format!(
                "need 0 <= p_min < p_max <= 1, got {} and {}",
                self.p_min, self.p_max
            )));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::domain("n list must be non-empty and positive"));
        }
        if self.workers == Some(0) {
            return Err(Error::domain("worker count must be positive"));
        }
        Ok(())
    }

    pub fn p_grid(&self) -> Vec<f64> {
        linear_grid(self.p_min, self.p_max, self.p_grid_count)
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(job()),
            Some(threads) => rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map(|pool| pool.install(job))
                .map_err(|e| Error::domain(format!("cannot start worker pool: {e}"))),
        }
    }
}

/// Fixed-point formatting.
pub fn fixed(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}

/// One row of the adjusted-level table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRow {
    pub n: u64,
    pub alpha: f64,
    pub alpha_prime: f64,
}

/// Prior-corrected adjusted levels for every `(n, alpha)` pair, ordered by
/// `n` then by the order of `alphas`.
pub fn alpha_table(alphas: &[f64], ns: &[u64], prior: ShapePair, config: &SolverConfig) -> Result<Vec<AlphaRow>> {
    let cells: Vec<(u64, f64)> = ns.iter().flat_map(|&n| alphas.iter().map(move |&a| (n, a))).collect();
    cells
        .par_iter()
        .map(|&(n, alpha)| {
            solve_prior(alpha, n, prior, config)
                .map(|r| AlphaRow {
                    n,
                    alpha,
                    alpha_prime: r.alpha_prime,
                })
                .map_err(|e| annotate(e, &format!("n = {n}, alpha = {alpha}")))
        })
        .collect()
}

fn annotate(err: Error, context: &str) -> Error {
    match err {
        Error::Domain(msg) => Error::Domain(format!("{context}: {msg}")),
        other => {
            log_context(context);
            other
        }
    }
}

fn log_context(context: &str) {
    eprintln!("failed cell: {context}");
}

pub fn alpha_table_csv(rows: &[AlphaRow]) -> String {
    let mut out = String::from("n,alpha,alpha_prime\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.n, r.alpha, fixed(r.alpha_prime, 6));
    }
    out
}

/// One row of a coverage / expected-length curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub method: String,
    pub n: u64,
    pub p: f64,
    pub coverage: f64,
    pub expected_length: f64,
}

/// Exact coverage and expected length for each method and `n` over the
/// configured `p` grid.
pub fn curves(specs: &[EstimatorSpec], report: &ReportConfig, solver: &SolverConfig) -> Result<Vec<CurveRow>> {
    report.validate()?;
    let grid = report.p_grid();
    let jobs: Vec<(EstimatorSpec, u64)> = specs
        .iter()
        .flat_map(|s| report.n_list.iter().map(move |&n| (*s, n)))
        .collect();
    let blocks: Vec<Vec<CurveRow>> = report.run(|| {
        jobs.par_iter()
            .map(|(spec, n)| {
                let table = IntervalTable::build(spec, *n, solver)?;
                Ok(curve_rows(&spec.method.label(), &table, &grid))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(blocks.into_iter().flatten().collect())
}

/// Curve rows for an already-built table.
pub fn curve_rows(label: &str, table: &IntervalTable, grid: &[f64]) -> Vec<CurveRow> {
    table
        .curve(grid)
        .into_iter()
        .map(|pt| CurveRow {
            method: label.to_string(),
            n: table.n(),
            p: pt.p,
            coverage: pt.coverage,
            expected_length: pt.expected_length,
        })
        .collect()
}

pub fn curves_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("method,n,p,coverage,expected_length\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.method,
            r.n,
            fixed(r.p, 6),
            fixed(r.coverage, 12),
            fixed(r.expected_length, 12)
        );
    }
    out
}

/// Quantity compared in a heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Higher is better.
    Coverage,
    /// Expected length; lower is better.
    Length,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Coverage => "coverage",
            Metric::Length => "length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    AWins,
    BWins,
    Tie,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::AWins => "A_wins",
            Verdict::BWins => "B_wins",
            Verdict::Tie => "tie",
        }
    }

    pub fn color(&self) -> &'static str {
        match self {
            Verdict::AWins => "#000000",
            Verdict::BWins => "#FFFFFF",
            Verdict::Tie => "#808080",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A_wins" => Some(Verdict::AWins),
            "B_wins" => Some(Verdict::BWins),
            "tie" => Some(Verdict::Tie),
            _ => None,
        }
    }
}

/// Compare two metric values after rounding both to `decimals` places.
pub fn compare(metric: Metric, a: f64, b: f64, decimals: u32) -> Verdict {
    let scale = 10f64.powi(decimals as i32);
    let ra = (a * scale).round();
    let rb = (b * scale).round();
    if ra == rb {
        return Verdict::Tie;
    }
    let a_better = match metric {
        Metric::Coverage => ra > rb,
        Metric::Length => ra < rb,
    };
    if a_better {
        Verdict::AWins
    } else {
        Verdict::BWins
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub n: u64,
    pub p: f64,
    pub metric_a: f64,
    pub metric_b: f64,
    pub verdict: Verdict,
}

/// Cell-by-cell comparison of two methods over an `(n, p)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub method_a: String,
    pub method_b: String,
    pub metric: Metric,
    pub ns: Vec<u64>,
    pub ps: Vec<f64>,
    /// Ordered by `n`, then ascending `p`.
    pub cells: Vec<GridCell>,
}

pub fn heatmap(
    a: &EstimatorSpec,
    b: &EstimatorSpec,
    metric: Metric,
    report: &ReportConfig,
    solver: &SolverConfig,
) -> Result<Heatmap> {
    report.validate()?;
    let ps = report.p_grid();
    let decimals = report.decimals_for_tie;
    let rows: Vec<Vec<GridCell>> = report.run(|| {
        report
            .n_list
            .par_iter()
            .map(|&n| {
                // Adjusted levels do not depend on p: solve once per n.
                let ta = IntervalTable::build(a, n, solver)?;
                let tb = IntervalTable::build(b, n, solver)?;
                Ok(ps
                    .iter()
                    .map(|&p| {
                        let (ma, mb) = match metric {
                            Metric::Coverage => (ta.coverage(p), tb.coverage(p)),
                            Metric::Length => (ta.expected_length(p), tb.expected_length(p)),
                        };
                        GridCell {
                            n,
                            p,
                            metric_a: ma,
                            metric_b: mb,
                            verdict: compare(metric, ma, mb, decimals),
                        }
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Heatmap {
        method_a: a.method.label(),
        method_b: b.method.label(),
        metric,
        ns: report.n_list.clone(),
        ps,
        cells: rows.into_iter().flatten().collect(),
    })
}

impl Heatmap {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,metric_a,metric_b,verdict\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.n,
                fixed(c.p, 6),
                fixed(c.metric_a, 12),
                fixed(c.metric_b, 12),
                c.verdict.name()
            );
        }
        out
    }

    /// One rect per cell: `p` along the x axis, `n` up the y axis.
    pub fn to_svg(&self) -> String {
        const CELL_W: usize = 2;
        const CELL_H: usize = 4;
        const MARGIN_L: usize = 60;
        const MARGIN_B: usize = 50;
        const MARGIN_T: usize = 30;
        const MARGIN_R: usize = 20;

        let cols = self.ps.len();
        let rows = self.ns.len();
        let plot_w = cols * CELL_W;
        let plot_h = rows * CELL_H;
        let width = MARGIN_L + plot_w + MARGIN_R;
        let height = MARGIN_T + plot_h + MARGIN_B;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(
            svg,
            r#"<title>{} of {} (A) vs {} (B)</title>"#,
            self.metric.name(),
            xml_escape(&self.method_a),
            xml_escape(&self.method_b)
        );
        let _ = writeln!(
            svg,
            r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#FFFFFF"/>"##
        );

        for (idx, c) in self.cells.iter().enumerate() {
            let row = idx / cols;
            let col = idx % cols;
            let x = MARGIN_L + col * CELL_W;
            let y = MARGIN_T + (rows - 1 - row) * CELL_H;
            let _ = writeln!(
                svg,
                r#"<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{}" data-n="{}" data-p="{}"/>"#,
                c.verdict.color(),
                c.n,
                fixed(c.p, 6)
            );
        }

        // Frame and axes.
        let _ = writeln!(
            svg,
            r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#000000"/>"##
        );
        let axis_y = MARGIN_T + plot_h;
        for tick in axis_ticks(cols) {
            let x = MARGIN_L + tick * CELL_W + CELL_W / 2;
            let _ = writeln!(
                svg,
                r#"<text x="{x}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
                axis_y + 14,
                fixed(self.ps[tick], 3)
            );
        }
        for tick in axis_ticks(rows) {
            let y = MARGIN_T + (rows - 1 - tick) * CELL_H + CELL_H / 2 + 3;
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{y}" font-size="10" text-anchor="end">{}</text>"#,
                MARGIN_L - 4,
                self.ns[tick]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">p</text>"#,
            MARGIN_L + plot_w / 2,
            height - 12
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">n</text>"#,
            MARGIN_T + plot_h / 2,
            MARGIN_T + plot_h / 2
        );
        svg.push_str("</svg>\n");
        svg
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == verdict).count()
    }
}

fn axis_ticks(len: usize) -> Vec<usize> {
    if len <= 1 {
        return vec![0];
    }
    let mut ticks: Vec<usize> = (0..5).map(|i| i * (len - 1) / 4).collect();
    ticks.dedup();
    ticks
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Walkthrough of the three intervals for a single observation: plain
/// Clopper-Pearson, prior `Beta(1, 1)` corrected and posterior
/// `Beta(1/2, 1/2)` corrected.
pub fn example_report(alpha: f64, obs: Observation, config: &SolverConfig, decimals: usize) -> Result<String> {
    let cp = clopper_pearson(obs, alpha)?;
    let prior = adjusted_interval(alpha, obs, ShapePair::uniform(), CorrectionMode::Prior, config)?;
    let post = adjusted_interval(alpha, obs, ShapePair::jeffreys(), CorrectionMode::Posterior, config)?;
    let level = 100.0 * (1.0 - alpha);
    let mut out = String::new();
    let _ = writeln!(out, "n = {}, X = {}, nominal level {level}%", obs.n(), obs.x());
    let _ = writeln!(
        out,
        "Clopper-Pearson: ({}, {})",
        fixed(cp.lower, decimals),
        fixed(cp.upper, decimals)
    );
    for (name, adj) in [("Prior Beta(1,1)", &prior), ("Posterior Beta(1/2,1/2)", &post)] {
        let _ = writeln!(
            out,
            "{name} correction: alpha' = {}, interval ({}, {})",
            fixed(adj.adjustment.alpha_prime, 5),
            fixed(adj.interval.lower, decimals),
            fixed(adj.interval.upper, decimals)
        );
    }
    Ok(out)
}

/// Write `contents` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
