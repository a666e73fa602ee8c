//! `vandal`: node generation, Vandermonde spectra, theorem-level bounds,
//! verification sweeps, and table reproduction from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource-cap error.

mod output;
mod suites;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{csv_num, csv_opt, emit, Format};
use vandal_core::bounds::{
    cluster_specialization_bound, equispaced_exact, ingham_bound, kernel_bound, separated_bounds,
    sharpness_upper, small_r_bound, table1, table2, trivial_bounds, BoundReport,
};
use vandal_core::torus_nodes::{gen_equispaced, gen_quasi_grid, gen_random_separated};
use vandal_core::vandermonde::{spectrum_with, SpectrumOptions, DEFAULT_EXPLICIT_CAP};
use vandal_core::{Error, NodeSet, VandermondeSpec};

#[derive(Parser)]
#[command(name = "vandal", version, about = "Exact spectra and condition bounds for multivariate Vandermonde matrices with nodes on the torus")]
struct Cli {
    /// Seed for all stochastic operations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cap on M·N^d entries for explicit-matrix operations
    #[arg(long, global = true, default_value_t = DEFAULT_EXPLICIT_CAP)]
    explicit_cap: usize,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Decimal places in CSV output
    #[arg(long, global = true, default_value_t = 6)]
    decimals: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a node set and write its serialization
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Compute extremal singular values and the condition number
    Spectrum {
        /// Node set file (JSON or plain text)
        #[arg(long)]
        nodes: PathBuf,
        /// Per-coordinate degree N
        #[arg(long)]
        n: usize,
        /// Also run the explicit-path SVD and report the discrepancy
        #[arg(long)]
        cross_check: bool,
    },
    /// Evaluate theorem-level bounds for given (N, q, d, M)
    Bound {
        /// Node set file; q, d, M are derived from it
        #[arg(long)]
        nodes: Option<PathBuf>,
        /// Synthetic separation (used when no node file is given)
        #[arg(long)]
        q: Option<f64>,
        /// Per-coordinate degree N
        #[arg(long)]
        n: usize,
        /// Dimension (synthetic evaluation only)
        #[arg(long)]
        d: Option<usize>,
        /// Node count (cluster hypothesis and equispaced grid parameter)
        #[arg(long)]
        m: Option<usize>,
        /// Smoothness parameter for the small-r bound
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Theorem id or "all"
        #[arg(long, default_value = "all")]
        theorem: String,
    },
    /// Run randomized verification suites; exit 1 on any violation
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Instances per randomized sweep
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
    /// Reproduce the bound comparison tables
    Tables {
        /// Which table: 1 (per-dimension thresholds) or 2 (small-r grid)
        #[arg(long)]
        which: u8,
        /// Dimension for table 1
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Emit (parameter, sigma_min, bounds) rows for plotting
    Sweep {
        #[arg(long, value_enum)]
        vary: Vary,
        /// Fixed node set file (vary n only)
        #[arg(long)]
        nodes: Option<PathBuf>,
        /// Per-coordinate degree N (fixed unless varying n)
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Dimension (fixed unless varying d)
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Node count for generated sets
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Smoothness parameter for the small-r bound column
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Separation target for generated sets (vary n, vary d)
        #[arg(long)]
        q: Option<f64>,
        /// Separation range start (vary q; default 1.8/(N−1))
        #[arg(long)]
        q_min: Option<f64>,
        /// Separation range end (vary q; default 3/(N−1))
        #[arg(long)]
        q_max: Option<f64>,
        /// Number of sweep points (vary q)
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Degree range (vary n, doubling)
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        /// Dimension range (vary d)
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Full grid (1/M){0,…,M−1}^d with q = 1/M
    Equispaced {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// N nodes with pairwise first-coordinate gaps in (1/N)·Z∖{0}
    QuasiGrid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Dart-throwing with separation at least q
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Spectral,
    Psi,
    Bounds,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vary {
    Q,
    N,
    D,
}

enum AppError {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "{e}"),
            AppError::Usage(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("VANDAL_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: VANDAL_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                AppError::Core(Error::CardinalityCap { .. })
                | AppError::Core(Error::ExplicitCap { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, AppError> {
    match &cli.command {
        Command::Gen { kind } => cmd_gen(cli, kind),
        Command::Spectrum { nodes, n, cross_check } => cmd_spectrum(cli, nodes, *n, *cross_check),
        Command::Bound { nodes, q, n, d, m, r, theorem } => {
            cmd_bound(cli, nodes.as_deref(), *q, *n, *d, *m, *r, theorem)
        }
        Command::Verify { suite, instances } => cmd_verify(cli, *suite, *instances),
        Command::Tables { which, d } => cmd_tables(cli, *which, *d),
        Command::Sweep {
            vary, nodes, n, d, m, r, q, q_min, q_max, steps, n_min, n_max, d_min, d_max,
        } => cmd_sweep(
            cli, *vary, nodes.as_deref(), *n, *d, *m, *r, *q, *q_min, *q_max, *steps, *n_min,
            *n_max, *d_min, *d_max,
        ),
    }
}

fn load_nodes(path: &Path) -> Result<NodeSet, AppError> {
    let content = std::fs::read_to_string(path)?;
    let trimmed = content.trim_start();
    let ns = if trimmed.starts_with('{') {
        NodeSet::from_json(&content)?
    } else {
        NodeSet::from_text(&content)?
    };
    Ok(ns)
}

fn cmd_gen(cli: &Cli, kind: &GenKind) -> Result<ExitCode, AppError> {
    let ns = match kind {
        GenKind::Equispaced { m, d } => gen_equispaced(*m, *d)?,
        GenKind::QuasiGrid { n, d } => gen_quasi_grid(*n, *d, cli.seed)?,
        GenKind::Random { m, d, q } => gen_random_separated(*m, *d, *q, cli.seed)?,
    };
    if let Some(q) = ns.separation_opt() {
        eprintln!("separation: {q}");
    }
    let content = match cli.format {
        Format::Json => format!("{}\n", ns.to_json()),
        Format::Csv | Format::Text => ns.to_text(),
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(cli: &Cli, nodes: &Path, n: usize, cross_check: bool) -> Result<ExitCode, AppError> {
    let ns = load_nodes(nodes)?;
    let spec = VandermondeSpec::new(ns, n)?;
    let opts = SpectrumOptions {
        cross_check,
        explicit_cap: cli.explicit_cap,
        ..SpectrumOptions::default()
    };
    let s = spectrum_with(&spec, &opts)?;
    let content = match cli.format {
        Format::Json => format!("{}\n", s.to_json()),
        Format::Csv => {
            let d = cli.decimals;
            format!(
                "sigma_min,sigma_max,cond,residual\n{},{},{},{}\n",
                csv_num(s.sigma_min, d),
                csv_num(s.sigma_max, d),
                csv_num(s.cond, d),
                csv_num(s.residual, d)
            )
        }
        Format::Text => format!(
            "sigma_min = {}\nsigma_max = {}\ncond = {}\nresidual = {}\n",
            s.sigma_min, s.sigma_max, s.cond, s.residual
        ),
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    cli: &Cli,
    nodes: Option<&Path>,
    q_flag: Option<f64>,
    n: usize,
    d_flag: Option<usize>,
    m_flag: Option<usize>,
    r: usize,
    theorem: &str,
) -> Result<ExitCode, AppError> {
    let (q, d, m) = match nodes {
        Some(path) => {
            let ns = load_nodes(path)?;
            let q = ns.separation()?;
            (q, ns.dim(), ns.len())
        }
        None => {
            let q = q_flag.ok_or_else(|| {
                AppError::Usage("either --nodes or --q is required".to_string())
            })?;
            let d = d_flag.ok_or_else(|| {
                AppError::Usage("--d is required for synthetic evaluation".to_string())
            })?;
            (q, d, m_flag.unwrap_or(2))
        }
    };

    let reports: Vec<BoundReport> = match theorem {
        "all" => {
            let (sep_min, sep_max) = separated_bounds(n, q, d)?;
            let (kern, kern_zeta) = kernel_bound(n, q, d)?;
            let mut rows = vec![sep_min, sep_max, ingham_bound(n, q, d)?];
            for rr in 1..=3 {
                rows.push(small_r_bound(n, q, d, rr)?);
            }
            rows.push(cluster_specialization_bound(n, q, d, m));
            rows.push(kern);
            rows.push(kern_zeta);
            rows
        }
        "separated_d1_min" => vec![separated_bounds(n, q, d)?.0],
        "separated_max" => vec![separated_bounds(n, q, d)?.1],
        "ingham" => vec![ingham_bound(n, q, d)?],
        "small_r" => vec![small_r_bound(n, q, d, r)?],
        "cluster_specialization" => vec![cluster_specialization_bound(n, q, d, m)],
        "kernel" => vec![kernel_bound(n, q, d)?.0],
        "kernel_zeta" => vec![kernel_bound(n, q, d)?.1],
        "trivial" => {
            let (lo, hi) = trivial_bounds(n, d);
            let content = match cli.format {
                Format::Json => format!(
                    "{}\n",
                    json!({"theorem":"trivial","sigma_min_upper":lo,"sigma_max_lower":hi})
                ),
                Format::Csv => format!(
                    "sigma_min_upper,sigma_max_lower\n{},{}\n",
                    csv_num(lo, cli.decimals),
                    csv_num(hi, cli.decimals)
                ),
                Format::Text => format!("sigma_min <= {lo} <= sigma_max\n"),
            };
            emit(cli.out.as_deref(), &content)?;
            return Ok(ExitCode::SUCCESS);
        }
        "equispaced_exact" => {
            let grid_m = m_flag.ok_or_else(|| {
                AppError::Usage("--m (grid parameter) is required for equispaced_exact".into())
            })?;
            let (lo, hi) = equispaced_exact(n, grid_m, d)?;
            let content = match cli.format {
                Format::Json => format!(
                    "{}\n",
                    json!({"theorem":"equispaced_exact","sigma_min":lo,"sigma_max":hi})
                ),
                Format::Csv => format!(
                    "sigma_min,sigma_max\n{},{}\n",
                    csv_num(lo, cli.decimals),
                    csv_num(hi, cli.decimals)
                ),
                Format::Text => format!("sigma_min = {lo}\nsigma_max = {hi}\n"),
            };
            emit(cli.out.as_deref(), &content)?;
            return Ok(ExitCode::SUCCESS);
        }
        "sharpness_upper" => {
            let v = sharpness_upper(n, q, d)?;
            let content = match cli.format {
                Format::Json => {
                    format!("{}\n", json!({"theorem":"sharpness_upper","upper_bound":v}))
                }
                Format::Csv => format!("upper_bound\n{}\n", csv_num(v, cli.decimals)),
                Format::Text => format!("sigma_min upper bound at separation {q}: {v}\n"),
            };
            emit(cli.out.as_deref(), &content)?;
            return Ok(ExitCode::SUCCESS);
        }
        other => {
            return Err(AppError::Usage(format!("unknown theorem id: {other}")));
        }
    };

    let content = match cli.format {
        Format::Json => {
            let vals: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| serde_json::to_value(r).expect("report serialization"))
                .collect();
            format!("{}\n", serde_json::Value::Array(vals))
        }
        Format::Csv => {
            let mut out =
                String::from("theorem,applicable,condition_lhs,condition_rhs,bound,normalized\n");
            for rep in &reports {
                let name = serde_json::to_value(rep.theorem).unwrap();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    name.as_str().unwrap(),
                    rep.applicable,
                    csv_num(rep.condition_lhs, cli.decimals),
                    csv_num(rep.condition_rhs, cli.decimals),
                    csv_opt(rep.bound, cli.decimals),
                    csv_opt(rep.normalized, cli.decimals),
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for rep in &reports {
                let name = serde_json::to_value(rep.theorem).unwrap();
                out.push_str(&format!(
                    "{}: applicable={} condition {} vs {}",
                    name.as_str().unwrap(),
                    rep.applicable,
                    rep.condition_lhs,
                    rep.condition_rhs
                ));
                if let Some(b) = rep.bound {
                    out.push_str(&format!(" bound={b}"));
                }
                out.push('\n');
            }
            out
        }
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, suite: Suite, instances: usize) -> Result<ExitCode, AppError> {
    let mut reports = Vec::new();
    if matches!(suite, Suite::Spectral | Suite::All) {
        reports.push(suites::spectral_suite(instances, cli.seed));
    }
    if matches!(suite, Suite::Psi | Suite::All) {
        reports.push(suites::psi_suite(1000, cli.seed));
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        reports.push(suites::bounds_suite(instances, cli.seed));
    }

    let content = match cli.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(&reports).expect("suite serialization")
        ),
        Format::Csv => {
            let mut out = String::from("suite,checks,violations,worst_margin\n");
            for r in &reports {
                out.push_str(&format!(
                    "{},{},{},{:e}\n",
                    r.suite, r.checks, r.violations, r.worst_margin
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!(
                    "suite={} checks={} violations={} worst_margin={:e}\n",
                    r.suite, r.checks, r.violations, r.worst_margin
                ));
                for f in &r.failures {
                    out.push_str(&format!("  violation: {f}\n"));
                }
            }
            out
        }
    };
    emit(cli.out.as_deref(), &content)?;
    if reports.iter().all(|r| r.passed()) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

/// Round up to 3 decimals (published convention for separation thresholds).
fn ceil3(x: f64) -> f64 {
    (x * 1000.0).ceil() / 1000.0
}

/// Round down to 3 decimals (published convention for lower bounds).
fn floor3(x: f64) -> f64 {
    (x * 1000.0).floor() / 1000.0
}

fn cmd_tables(cli: &Cli, which: u8, d: usize) -> Result<ExitCode, AppError> {
    let content = match which {
        1 => {
            let rows = table1(d)?;
            match cli.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string(&rows).expect("table serialization")
                ),
                Format::Csv | Format::Text => {
                    let mut out = String::from("label,condition,normalized_bound,evaluable,note\n");
                    for row in &rows {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            row.label,
                            csv_num(row.condition, cli.decimals),
                            csv_opt(row.normalized_bound, cli.decimals),
                            row.evaluable,
                            row.note.as_deref().unwrap_or(""),
                        ));
                    }
                    out
                }
            }
        }
        2 => {
            let t = table2()?;
            match cli.format {
                Format::Json => {
                    let rounded_conditions: Vec<Vec<f64>> = t
                        .conditions
                        .iter()
                        .map(|row| row.iter().map(|&x| ceil3(x)).collect())
                        .collect();
                    let rounded_bounds: Vec<Vec<f64>> = t
                        .bounds
                        .iter()
                        .map(|row| row.iter().map(|&x| floor3(x)).collect())
                        .collect();
                    format!(
                        "{}\n",
                        json!({
                            "conditions": t.conditions,
                            "bounds": t.bounds,
                            "conditions_3dp": rounded_conditions,
                            "bounds_3dp": rounded_bounds,
                        })
                    )
                }
                Format::Csv | Format::Text => {
                    // thresholds rounded up, bounds rounded down, 3 decimals
                    let mut out = String::from("r,d,condition,bound\n");
                    for r in 1..=3usize {
                        for dd in 1..=3usize {
                            out.push_str(&format!(
                                "{},{},{:.3},{:.3}\n",
                                r,
                                dd,
                                ceil3(t.conditions[r - 1][dd - 1]),
                                floor3(t.bounds[r - 1][dd - 1]),
                            ));
                        }
                    }
                    out
                }
            }
        }
        other => {
            return Err(AppError::Usage(format!(
                "unknown table {other}; use --which 1 or --which 2"
            )));
        }
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

/// The σ_min lower-bound columns shared by the sweep emitters.
struct BoundColumns {
    separated_min: Option<f64>,
    ingham: Option<f64>,
    small_r: Option<f64>,
    cluster: Option<f64>,
    kernel: Option<f64>,
}

fn bound_columns(n: usize, q: f64, d: usize, m: usize, r: usize) -> Result<BoundColumns, Error> {
    let sep = separated_bounds(n, q, d)?.0;
    let ing = ingham_bound(n, q, d)?;
    let sr = if (1..=3).contains(&r) {
        small_r_bound(n, q, d, r)?.bound
    } else {
        None
    };
    let cl = cluster_specialization_bound(n, q, d, m);
    let ke = kernel_bound(n, q, d)?.0;
    Ok(BoundColumns {
        separated_min: sep.bound,
        ingham: ing.bound,
        small_r: sr,
        cluster: cl.bound,
        kernel: ke.bound,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    cli: &Cli,
    vary: Vary,
    nodes: Option<&Path>,
    n: usize,
    d: usize,
    m: usize,
    r: usize,
    q: Option<f64>,
    q_min: Option<f64>,
    q_max: Option<f64>,
    steps: usize,
    n_min: usize,
    n_max: usize,
    d_min: usize,
    d_max: usize,
) -> Result<ExitCode, AppError> {
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    let mut csv = String::new();
    let dec = cli.decimals;

    match vary {
        Vary::Q => {
            if steps < 2 {
                return Err(AppError::Usage("--steps must be at least 2".into()));
            }
            let lo = q_min.unwrap_or(1.8 / (n as f64 - 1.0));
            let hi = q_max.unwrap_or(3.0 / (n as f64 - 1.0));
            csv.push_str("q,sigma_min,separated_min,ingham,small_r,cluster,kernel\n");
            for i in 0..steps {
                let q_target = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
                let mut generated = None;
                for attempt in 0..20u64 {
                    let seed = cli.seed.wrapping_add(i as u64 * 1000 + attempt);
                    if let Ok(ns) = gen_random_separated(m, d, q_target, seed) {
                        generated = Some(ns);
                        break;
                    }
                }
                let Some(ns) = generated else {
                    continue;
                };
                let q_actual = ns.separation()?;
                let spec = VandermondeSpec::new(ns, n)?;
                let s = vandal_core::vandermonde::spectrum(&spec)?;
                let cols = bound_columns(n, q_actual, d, m, r)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    csv_num(q_actual, dec),
                    csv_num(s.sigma_min, dec),
                    csv_opt(cols.separated_min, dec),
                    csv_opt(cols.ingham, dec),
                    csv_opt(cols.small_r, dec),
                    csv_opt(cols.cluster, dec),
                    csv_opt(cols.kernel, dec),
                ));
                json_rows.push(json!({
                    "q": q_actual, "sigma_min": s.sigma_min,
                    "separated_min": cols.separated_min, "ingham": cols.ingham,
                    "small_r": cols.small_r, "cluster": cols.cluster, "kernel": cols.kernel,
                }));
            }
        }
        Vary::N => {
            let ns = match nodes {
                Some(path) => load_nodes(path)?,
                None => gen_random_separated(m, d, q.unwrap_or(0.1), cli.seed)?,
            };
            let q_actual = ns.separation()?;
            let dim = ns.dim();
            let m_actual = ns.len();
            csv.push_str("n,sigma_min,sigma_max,cond,separated_min,ingham,small_r\n");
            let mut nn = n_min.max(2);
            while nn <= n_max {
                let spec = VandermondeSpec::new(ns.clone(), nn)?;
                let s = vandal_core::vandermonde::spectrum(&spec)?;
                let cols = bound_columns(nn, q_actual, dim, m_actual, r)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    nn,
                    csv_num(s.sigma_min, dec),
                    csv_num(s.sigma_max, dec),
                    csv_num(s.cond, dec),
                    csv_opt(cols.separated_min, dec),
                    csv_opt(cols.ingham, dec),
                    csv_opt(cols.small_r, dec),
                ));
                json_rows.push(json!({
                    "n": nn, "sigma_min": s.sigma_min, "sigma_max": s.sigma_max,
                    "cond": s.cond, "separated_min": cols.separated_min,
                    "ingham": cols.ingham, "small_r": cols.small_r,
                }));
                nn *= 2;
            }
        }
        Vary::D => {
            csv.push_str("d,q,sigma_min,separated_min,ingham,small_r,cluster,kernel\n");
            for dd in d_min..=d_max.max(d_min) {
                let q_target = q.unwrap_or(0.2);
                let mut generated = None;
                for attempt in 0..20u64 {
                    let seed = cli.seed.wrapping_add(dd as u64 * 1000 + attempt);
                    if let Ok(ns) = gen_random_separated(m, dd, q_target, seed) {
                        generated = Some(ns);
                        break;
                    }
                }
                let Some(ns) = generated else {
                    continue;
                };
                let q_actual = ns.separation()?;
                let spec = VandermondeSpec::new(ns, n)?;
                let s = vandal_core::vandermonde::spectrum(&spec)?;
                let cols = bound_columns(n, q_actual, dd, m, r)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    dd,
                    csv_num(q_actual, dec),
                    csv_num(s.sigma_min, dec),
                    csv_opt(cols.separated_min, dec),
                    csv_opt(cols.ingham, dec),
                    csv_opt(cols.small_r, dec),
                    csv_opt(cols.cluster, dec),
                    csv_opt(cols.kernel, dec),
                ));
                json_rows.push(json!({
                    "d": dd, "q": q_actual, "sigma_min": s.sigma_min,
                    "separated_min": cols.separated_min, "ingham": cols.ingham,
                    "small_r": cols.small_r, "cluster": cols.cluster, "kernel": cols.kernel,
                }));
            }
        }
    }

    let content = match cli.format {
        Format::Json => format!("{}\n", serde_json::Value::Array(json_rows)),
        Format::Csv | Format::Text => csv,
    };
    emit(cli.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}
