//! Command-line front end. All the work happens in the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use binomial_ci::adjustment::{adjusted_interval, CorrectionMode, SolverConfig};
use binomial_ci::intervals::{bayes_beta, clopper_pearson, wald, wilson, EstimatorSpec, Method, Observation};
use binomial_ci::report::{
    alpha_table, alpha_table_csv, curves, curves_csv, example_report, fixed, heatmap, write_atomic, Metric,
    OutputFormat, ReportConfig, TABLE_NS,
};
use binomial_ci::special::ShapePair;
use binomial_ci::Error;

#[derive(Parser, Debug)]
#[command(
    name = "binomial-ci",
    version,
    about = "Exact and coverage-adjusted binomial confidence intervals"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Nominal level alpha.
    #[arg(long, global = true, default_value_t = 0.05)]
    alpha: f64,
    /// Beta prior shapes `r,s` for methods that take one.
    #[arg(long, global = true, value_parser = parse_shapes)]
    prior: Option<ShapePair>,
    /// Solver tolerance on |C(alpha') - (1 - alpha)|.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for grid sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Decimals for printed intervals.
    #[arg(long, global = true)]
    precision: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Coverage,
    Length,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interval for one observation.
    Interval {
        /// wald | wilson | cp | bayes | jeffreys | adjusted-prior | adjusted-posterior, optionally `:r,s`.
        #[arg(long)]
        method: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x: u64,
    },
    /// Prior-corrected alpha' for every (n, alpha) pair, as CSV.
    AlphaTable {
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.01])]
        alphas: Vec<f64>,
        /// Comma list; `a..b` ranges allowed. Defaults to the standard table.
        #[arg(long)]
        ns: Option<String>,
    },
    /// Exact coverage and expected length over a p grid, as CSV.
    Curves {
        /// Repeat for several methods.
        #[arg(long = "method", default_values_t = ["cp".to_string(), "wilson".to_string()])]
        methods: Vec<String>,
        #[arg(long, default_value = "25")]
        ns: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Cell-by-cell comparison of two methods over an (n, p) grid.
    Heatmap {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = MetricArg::Length)]
        metric: MetricArg,
        /// Overrides --n-min/--n-max.
        #[arg(long)]
        ns: Option<String>,
        #[arg(long, default_value_t = 5)]
        n_min: u64,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        /// Decimals both metrics are rounded to before comparing.
        #[arg(long, default_value_t = 3)]
        decimals: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Walkthrough of the plain, prior- and posterior-corrected intervals.
    Example {
        #[arg(long, default_value_t = 96)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        x: u64,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 500)]
    p_count: usize,
    #[arg(long, default_value_t = 0.001)]
    p_min: f64,
    #[arg(long, default_value_t = 0.5)]
    p_max: f64,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_shapes(s: &str) -> Result<ShapePair, String> {
    let (r, t) = s.split_once(',').ok_or_else(|| format!("expected `r,s`, got `{s}`"))?;
    let r: f64 = r.trim().parse().map_err(|_| format!("bad shape `{r}`"))?;
    let t: f64 = t.trim().parse().map_err(|_| format!("bad shape `{t}`"))?;
    ShapePair::new(r, t).map_err(|e| e.to_string())
}

/// `name` or `name:r,s`. An inline prior beats `--prior`, which beats the
/// method's default.
fn parse_method(spec: &str, prior: Option<ShapePair>) -> Result<Method, Failure> {
    let (name, inline) = match spec.split_once(':') {
        Some((name, shapes)) => (name, Some(parse_shapes(shapes).map_err(usage)?)),
        None => (spec, None),
    };
    let pick = |default: ShapePair| inline.or(prior).unwrap_or(default);
    Ok(match name {
        "wald" => Method::Wald,
        "wilson" => Method::Wilson,
        "cp" | "clopper-pearson" => Method::ClopperPearson,
        "bayes" => Method::BayesBeta(pick(ShapePair::jeffreys())),
        "jeffreys" => Method::BayesBeta(ShapePair::jeffreys()),
        "adjusted-prior" => Method::AdjustedPrior(pick(ShapePair::uniform())),
        "adjusted-posterior" => Method::AdjustedPosterior(pick(ShapePair::jeffreys())),
        other => return Err(usage(format!("unknown method `{other}`"))),
    })
}

/// Comma-separated integers; `a..b` is an inclusive range.
fn parse_ns(s: &str) -> Result<Vec<u64>, Failure> {
    let int = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad n `{t}`")));
    let mut ns = Vec::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => ns.extend(int(lo)?..=int(hi)?),
            None => ns.push(int(item)?),
        }
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(usage(format!("n list `{s}` must be non-empty and positive")));
    }
    Ok(ns)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let solver = SolverConfig::with_tol(g.tol);
    if let Some(threads) = g.workers {
        if threads == 0 {
            return Err(usage("--workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
    }
    if g.format == Format::Svg && !matches!(cli.command, Command::Heatmap { .. }) {
        return Err(usage("--format svg is only available for heatmap"));
    }
    let out = g.out.as_deref();

    match &cli.command {
        Command::Interval { method, n, x } => {
            let obs = Observation::new(*n, *x)?;
            let method = parse_method(method, g.prior)?;
            let d = g.precision.unwrap_or(4);
            let (interval, alpha_prime) = match method {
                Method::Wald => (wald(obs, g.alpha)?, None),
                Method::Wilson => (wilson(obs, g.alpha)?, None),
                Method::ClopperPearson => (clopper_pearson(obs, g.alpha)?, None),
                Method::BayesBeta(prior) => (bayes_beta(obs, g.alpha, prior)?, None),
                Method::AdjustedPrior(prior) | Method::AdjustedPosterior(prior) => {
                    let mode = if matches!(method, Method::AdjustedPrior(_)) {
                        CorrectionMode::Prior
                    } else {
                        CorrectionMode::Posterior
                    };
                    let adj = adjusted_interval(g.alpha, obs, prior, mode, &solver)?;
                    (adj.interval, Some(adj.adjustment.alpha_prime))
                }
            };
            let mut text = format!("{} {}\n", fixed(interval.lower, d), fixed(interval.upper, d));
            if let Some(a) = alpha_prime {
                text.push_str(&format!("alpha_prime {}\n", fixed(a, 6)));
            }
            emit(out, &text)
        }
        Command::AlphaTable { alphas, ns } => {
            let ns = match ns {
                Some(s) => parse_ns(s)?,
                None => TABLE_NS.to_vec(),
            };
            let prior = g.prior.unwrap_or_else(ShapePair::uniform);
            let rows = alpha_table(alphas, &ns, prior, &solver)?;
            emit(out, &alpha_table_csv(&rows))
        }
        Command::Curves { methods, ns, grid } => {
            let specs = methods
                .iter()
                .map(|m| Ok(EstimatorSpec::new(parse_method(m, g.prior)?, g.alpha)?))
                .collect::<Result<Vec<_>, Failure>>()?;
            let report = report_config(parse_ns(ns)?, grid, 3, OutputFormat::Csv);
            let rows = curves(&specs, &report, &solver)?;
            emit(out, &curves_csv(&rows))
        }
        Command::Heatmap {
            a,
            b,
            metric,
            ns,
            n_min,
            n_max,
            decimals,
            grid,
        } => {
            let a = EstimatorSpec::new(parse_method(a, g.prior)?, g.alpha)?;
            let b = EstimatorSpec::new(parse_method(b, g.prior)?, g.alpha)?;
            let ns = match ns {
                Some(s) => parse_ns(s)?,
                None if n_min <= n_max && *n_min > 0 => (*n_min..=*n_max).collect(),
                None => return Err(usage("need 0 < --n-min <= --n-max")),
            };
            let metric = match metric {
                MetricArg::Coverage => Metric::Coverage,
                MetricArg::Length => Metric::Length,
            };
            let format = match g.format {
                Format::Csv => OutputFormat::Csv,
                Format::Svg => OutputFormat::Svg,
            };
            let report = report_config(ns, grid, *decimals, format);
            let map = heatmap(&a, &b, metric, &report, &solver)?;
            match (format, out) {
                (OutputFormat::Csv, _) => emit(out, &map.to_csv()),
                // The SVG goes to --out and the cell CSV next to it.
                (OutputFormat::Svg, Some(path)) => {
                    emit(Some(path), &map.to_svg())?;
                    emit(Some(&path.with_extension("csv")), &map.to_csv())
                }
                (OutputFormat::Svg, None) => emit(None, &map.to_svg()),
            }
        }
        Command::Example { n, x } => {
            let obs = Observation::new(*n, *x)?;
            let text = example_report(g.alpha, obs, &solver, g.precision.unwrap_or(3))?;
            emit(out, &text)
        }
    }
}

fn report_config(n_list: Vec<u64>, grid: &GridArgs, decimals: u32, format: OutputFormat) -> ReportConfig {
    ReportConfig {
        p_grid_count: grid.p_count,
        p_min: grid.p_min,
        p_max: grid.p_max,
        n_list,
        decimals_for_tie: decimals,
        output_format: format,
        workers: None,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_failure() { 2 } else { 1 })
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}
