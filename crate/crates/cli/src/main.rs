//! Command-line front end for the local polynomial regression crate.
//!
//! Subcommands: `fit` (one estimator, sampled on an evaluation grid),
//! `adapt` (the smoothness-adaptive aggregate), `table` (the benchmark
//! MSE table), `rate` (convergence-rate study), and `kernels` (built-in
//! kernel diagnostics). Defaults can come from a `key = value` file via
//! `--config`; explicit flags always win. All output is comma-delimited
//! text with LF line endings, numbers printed with full round-trip
//! precision, and every subcommand is deterministic given its seed.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use thiserror::Error as ThisError;

use lpreg::adaptive::fit_adaptive;
use lpreg::kernels::{check_square_integrable, make_builtin, singularity_bound, KernelName};
use lpreg::lpe::{Dataset, LpeModel};
use lpreg::numerics::RandomSource;
use lpreg::sim::{
    eval_grid, generate, log_spaced_grid, rate_study, run_table_experiment, SimulationConfig,
    Target,
};

#[derive(Parser)]
#[command(
    name = "lpreg",
    version,
    about = "Local polynomial regression with singular interpolating kernels"
)]
struct Cli {
    /// Defaults file with `key = value` lines (same names as the long
    /// flags); explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one estimator and write the fitted curve on an evaluation grid.
    Fit(FitArgs),
    /// Fit the smoothness-adaptive aggregate and write its curve.
    Adapt(AdaptArgs),
    /// Run the benchmark MSE table over kernels and targets.
    Table(TableArgs),
    /// Run a convergence-rate study over a list of sample sizes.
    Rate(RateArgs),
    /// Print diagnostics for the built-in kernels.
    Kernels(KernelsArgs),
}

#[derive(Args)]
struct FitArgs {
    /// Dataset file of comma- or whitespace-delimited `x y` rows; when
    /// omitted, a dataset is simulated from the target settings.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Simulated sample size.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the simulated dataset.
    #[arg(long)]
    seed: Option<u64>,
    /// Kernel: k1, k2, k3 or rect.
    #[arg(long)]
    kernel: Option<String>,
    /// Singularity exponent a.
    #[arg(long)]
    a: Option<f64>,
    /// Polynomial order of the local fit.
    #[arg(long)]
    order: Option<usize>,
    /// Bandwidth h (required, here or in the config file).
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Simulated regression function: f or g.
    #[arg(long)]
    target: Option<String>,
    /// Simulated noise variance.
    #[arg(long)]
    noise_variance: Option<f64>,
    /// Left end of the evaluation interval.
    #[arg(long)]
    x_min: Option<f64>,
    /// Right end of the evaluation interval.
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of evaluation-grid points.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Truncation level; when given, predictions are clamped.
    #[arg(long)]
    l0: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdaptArgs {
    /// Dataset file of comma- or whitespace-delimited `x y` rows; when
    /// omitted, a dataset is simulated from the target settings.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Simulated sample size.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the simulated dataset.
    #[arg(long)]
    seed: Option<u64>,
    /// Kernel: k1, k2, k3 or rect.
    #[arg(long)]
    kernel: Option<String>,
    /// Singularity exponent a.
    #[arg(long)]
    a: Option<f64>,
    /// Bandwidth constant α in h = α n^(−1/(2β+1)).
    #[arg(long)]
    alpha: Option<f64>,
    /// Truncation level L0 of the candidate estimators.
    #[arg(long)]
    l0: Option<f64>,
    /// Upper end of the smoothness grid.
    #[arg(long)]
    beta_max: Option<f64>,
    /// Simulated regression function: f or g.
    #[arg(long)]
    target: Option<String>,
    /// Simulated noise variance.
    #[arg(long)]
    noise_variance: Option<f64>,
    /// Left end of the evaluation interval.
    #[arg(long)]
    x_min: Option<f64>,
    /// Right end of the evaluation interval.
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of evaluation-grid points.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Sample size per replication.
    #[arg(long)]
    n: Option<usize>,
    /// Master seed of the experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Singularity exponent a for the singular kernels.
    #[arg(long)]
    a: Option<f64>,
    /// Polynomial order of the local fits.
    #[arg(long)]
    order: Option<usize>,
    /// Noise variance.
    #[arg(long)]
    noise_variance: Option<f64>,
    /// Restrict the table to one target (f or g); default both.
    #[arg(long)]
    target: Option<String>,
    /// Left end of the design and evaluation interval.
    #[arg(long)]
    x_min: Option<f64>,
    /// Right end of the design and evaluation interval.
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of evaluation-grid points.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Monte Carlo replications per estimate.
    #[arg(long)]
    replications: Option<usize>,
    /// Running-median window (odd).
    #[arg(long)]
    window: Option<usize>,
    /// Truncation level L0.
    #[arg(long)]
    l0: Option<f64>,
    /// Smallest tuning-grid bandwidth.
    #[arg(long)]
    h_min: Option<f64>,
    /// Largest tuning-grid bandwidth.
    #[arg(long)]
    h_max: Option<f64>,
    /// Number of tuning-grid bandwidths (log-spaced).
    #[arg(long)]
    h_count: Option<usize>,
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RateArgs {
    /// Master seed of the study.
    #[arg(long)]
    seed: Option<u64>,
    /// Kernel: k1, k2, k3 or rect.
    #[arg(long)]
    kernel: Option<String>,
    /// Singularity exponent a.
    #[arg(long)]
    a: Option<f64>,
    /// Nominal smoothness β (order is ⌊β⌋, bandwidth α n^(−1/(2β+1))).
    #[arg(long)]
    beta: Option<f64>,
    /// Bandwidth constant α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated increasing sample sizes.
    #[arg(long)]
    n_list: Option<String>,
    /// Regression function: f or g.
    #[arg(long)]
    target: Option<String>,
    /// Noise variance.
    #[arg(long)]
    noise_variance: Option<f64>,
    /// Left end of the design and evaluation interval.
    #[arg(long)]
    x_min: Option<f64>,
    /// Right end of the design and evaluation interval.
    #[arg(long)]
    x_max: Option<f64>,
    /// Number of evaluation-grid points.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Monte Carlo replications per sample size.
    #[arg(long)]
    replications: Option<usize>,
    /// Truncation level L0.
    #[arg(long)]
    l0: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KernelsArgs {
    /// Singularity exponent a for the singular kernels.
    #[arg(long)]
    a: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Failures with their exit-code class: 2 for input trouble, 3 for
/// data-validity violations, 4 for parameter violations.
#[derive(Debug, ThisError)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Lib(#[from] lpreg::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Lib(e) => match e {
                lpreg::Error::DuplicateDesignPoints(_, _)
                | lpreg::Error::DataPointCoincidence(_) => 3,
                _ => 4,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => load_config_file(path)?,
        None => HashMap::new(),
    };
    match cli.command {
        Command::Fit(args) => cmd_fit(args, &file),
        Command::Adapt(args) => cmd_adapt(args, &file),
        Command::Table(args) => cmd_table(args, &file),
        Command::Rate(args) => cmd_rate(args, &file),
        Command::Kernels(args) => cmd_kernels(args, &file),
    }
}

// ---------------------------------------------------------------------
// Config-file handling and flag resolution
// ---------------------------------------------------------------------

const VALID_KEYS: &[&str] = &[
    "a",
    "alpha",
    "bandwidth",
    "beta",
    "beta-max",
    "grid-size",
    "h-count",
    "h-max",
    "h-min",
    "input",
    "kernel",
    "l0",
    "n",
    "n-list",
    "noise-variance",
    "order",
    "out",
    "replications",
    "seed",
    "target",
    "window",
    "x-max",
    "x-min",
];

fn load_config_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config file {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input(format!(
                "{}: line {}: expected `key = value`, found {line:?}",
                path.display(),
                idx + 1
            )));
        };
        let key = key.trim();
        if !VALID_KEYS.contains(&key) {
            return Err(CliError::Input(format!(
                "{}: line {}: unknown key {key:?}",
                path.display(),
                idx + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Three-way merge of one setting: explicit flag, then config file, then
/// the built-in default.
fn setting<T>(
    file: &HashMap<String, String>,
    key: &str,
    flag: Option<T>,
    default: T,
) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    match optional(file, key, flag)? {
        Some(v) => Ok(v),
        None => Ok(default),
    }
}

/// Like [`setting`], but with no default.
fn optional<T>(
    file: &HashMap<String, String>,
    key: &str,
    flag: Option<T>,
) -> Result<Option<T>, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    match file.get(key) {
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|e| CliError::Input(format!("config key {key} = {s:?}: {e}"))),
        None => Ok(None),
    }
}

fn parse_kernel(name: &str) -> Result<KernelName, CliError> {
    name.parse().map_err(CliError::Lib)
}

fn parse_target(name: &str) -> Result<Target, CliError> {
    name.parse().map_err(CliError::Lib)
}

fn parse_n_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad sample size {:?} in n-list", p.trim())))
        })
        .collect()
}

// ---------------------------------------------------------------------
// Dataset and output plumbing
// ---------------------------------------------------------------------

/// Reads a dataset of `x y` rows, delimited by commas and/or whitespace.
/// A single leading header line is tolerated and skipped.
fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read dataset {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(',')
            .flat_map(str::split_whitespace)
            .collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed {
            None if idx == 0 => continue,
            None => {
                return Err(CliError::Input(format!(
                    "{}: line {}: expected numeric `x y`, found {line:?}",
                    path.display(),
                    idx + 1
                )));
            }
            Some(nums) if nums.len() == 2 => {
                xs.push(nums[0]);
                ys.push(nums[1]);
            }
            Some(nums) => {
                return Err(CliError::Input(format!(
                    "{}: line {}: expected 2 fields, found {}",
                    path.display(),
                    idx + 1,
                    nums.len()
                )));
            }
        }
    }
    if xs.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(Dataset::from_univariate(xs, ys)?)
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// The simulated-or-loaded dataset shared by `fit` and `adapt`, plus the
/// truth function when the data came from a simulation.
struct FitData {
    data: Dataset,
    truth: Option<Target>,
}

#[allow(clippy::too_many_arguments)]
fn obtain_data(
    file: &HashMap<String, String>,
    input: Option<PathBuf>,
    n: Option<usize>,
    seed: Option<u64>,
    target: Option<String>,
    noise_variance: Option<f64>,
    x_min: Option<f64>,
    x_max: Option<f64>,
) -> Result<FitData, CliError> {
    if let Some(path) = optional(file, "input", input)? {
        return Ok(FitData {
            data: read_dataset(&path)?,
            truth: None,
        });
    }
    let target = parse_target(&setting(file, "target", target, "f".to_string())?)?;
    let config = SimulationConfig {
        n: setting(file, "n", n, 80)?,
        x_range: (
            setting(file, "x-min", x_min, -2.0)?,
            setting(file, "x-max", x_max, 2.0)?,
        ),
        noise_variance: setting(file, "noise-variance", noise_variance, 0.5)?,
        target,
        ..SimulationConfig::default()
    };
    let mut rs = RandomSource::new(setting(file, "seed", seed, 0)?);
    Ok(FitData {
        data: generate(&config, &mut rs)?,
        truth: Some(target),
    })
}

/// The evaluation interval: explicit settings win; otherwise the data's
/// own range for loaded files and [−2, 2] for simulations.
fn eval_range(
    file: &HashMap<String, String>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    fit: &FitData,
) -> Result<(f64, f64), CliError> {
    let (data_lo, data_hi) = match fit.truth {
        Some(_) => (-2.0, 2.0),
        None => {
            let xs = (0..fit.data.len()).map(|i| fit.data.point(i)[0]);
            let lo = xs.clone().fold(f64::INFINITY, f64::min);
            let hi = xs.fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
    };
    let lo = setting(file, "x-min", x_min, data_lo)?;
    let hi = setting(file, "x-max", x_max, data_hi)?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Input(format!(
            "evaluation interval ({lo}, {hi}) is empty or not finite"
        )));
    }
    Ok((lo, hi))
}

fn curve_header(truth: Option<Target>) -> &'static str {
    match truth {
        Some(_) => "x,estimate,truth\n",
        None => "x,estimate\n",
    }
}

// ---------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------

fn cmd_fit(args: FitArgs, file: &HashMap<String, String>) -> Result<(), CliError> {
    let fit = obtain_data(
        file,
        args.input,
        args.n,
        args.seed,
        args.target,
        args.noise_variance,
        args.x_min,
        args.x_max,
    )?;
    let range = eval_range(file, args.x_min, args.x_max, &fit)?;
    let kernel_name = parse_kernel(&setting(file, "kernel", args.kernel, "k1".to_string())?)?;
    let kernel = make_builtin(kernel_name, setting(file, "a", args.a, 0.2)?, 1)?;
    let order = setting(file, "order", args.order, 7)?;
    let bandwidth = optional(file, "bandwidth", args.bandwidth)?
        .ok_or_else(|| CliError::Input("fit needs --bandwidth (or a config entry)".into()))?;
    let l0 = optional(file, "l0", args.l0)?;
    let grid_size = setting(file, "grid-size", args.grid_size, 1001)?;
    let model = LpeModel::new(fit.data, order, bandwidth, kernel)?;
    let mut sc = model.eval_scratch();
    let mut content = String::from(curve_header(fit.truth));
    for x in eval_grid(range, grid_size) {
        let estimate = match l0 {
            Some(l0) => model.predict_truncated_with(&[x], l0, &mut sc),
            None => model.predict_with(&[x], &mut sc),
        };
        match fit.truth {
            Some(t) => writeln!(content, "{x},{estimate},{}", t.eval(x)).expect("string write"),
            None => writeln!(content, "{x},{estimate}").expect("string write"),
        }
    }
    write_output(args.out.as_deref(), &content)
}

fn cmd_adapt(args: AdaptArgs, file: &HashMap<String, String>) -> Result<(), CliError> {
    let fit = obtain_data(
        file,
        args.input,
        args.n,
        args.seed,
        args.target,
        args.noise_variance,
        args.x_min,
        args.x_max,
    )?;
    let range = eval_range(file, args.x_min, args.x_max, &fit)?;
    let kernel_name = parse_kernel(&setting(file, "kernel", args.kernel, "k2".to_string())?)?;
    let kernel = make_builtin(kernel_name, setting(file, "a", args.a, 0.2)?, 1)?;
    let alpha = setting(file, "alpha", args.alpha, 1.0)?;
    let l0 = setting(file, "l0", args.l0, 1.0)?;
    let beta_max = setting(file, "beta-max", args.beta_max, 8.0)?;
    let grid_size = setting(file, "grid-size", args.grid_size, 1001)?;
    let est = fit_adaptive(&fit.data, beta_max, &kernel, alpha, l0, None)?;
    let mut content = format!(
        "# selected_beta_first = {}\n# selected_beta_second = {}\n",
        est.selected_beta_f(),
        est.selected_beta_g()
    );
    content.push_str(curve_header(fit.truth));
    for x in eval_grid(range, grid_size) {
        let estimate = est.predict(&[x]);
        match fit.truth {
            Some(t) => writeln!(content, "{x},{estimate},{}", t.eval(x)).expect("string write"),
            None => writeln!(content, "{x},{estimate}").expect("string write"),
        }
    }
    write_output(args.out.as_deref(), &content)
}

fn cmd_table(args: TableArgs, file: &HashMap<String, String>) -> Result<(), CliError> {
    let h_min = setting(file, "h-min", args.h_min, 0.05)?;
    let h_max = setting(file, "h-max", args.h_max, 2.0)?;
    let h_count = setting(file, "h-count", args.h_count, 40)?;
    if !(h_min.is_finite() && h_min > 0.0 && h_max > h_min) || h_count < 2 {
        return Err(CliError::Input(format!(
            "bandwidth grid needs 0 < h-min < h-max and h-count >= 2, \
             got {h_min}, {h_max}, {h_count}"
        )));
    }
    let only_target = match optional(file, "target", args.target)? {
        Some(name) => Some(parse_target(&name)?),
        None => None,
    };
    let config = SimulationConfig {
        n: setting(file, "n", args.n, 80)?,
        x_range: (
            setting(file, "x-min", args.x_min, -2.0)?,
            setting(file, "x-max", args.x_max, 2.0)?,
        ),
        noise_variance: setting(file, "noise-variance", args.noise_variance, 0.5)?,
        target: Target::F,
        kernel_name: KernelName::K1,
        a: setting(file, "a", args.a, 0.2)?,
        order: setting(file, "order", args.order, 7)?,
        bandwidth_grid: log_spaced_grid(h_min, h_max, h_count),
        seed: setting(file, "seed", args.seed, 0)?,
        replications: setting(file, "replications", args.replications, 100)?,
        grid_size: setting(file, "grid-size", args.grid_size, 1001)?,
        smoothing_window: setting(file, "window", args.window, 7)?,
        l0: setting(file, "l0", args.l0, 1.0)?,
    };
    let report = run_table_experiment(&config)?;
    let mut content = String::from(
        "target,kernel,tuned_bandwidth,raw_mse_mean,raw_mse_se,\
         smoothed_mse_mean,smoothed_mse_se,rect_mse,seed\n",
    );
    for cell in &report.table {
        if only_target.is_some_and(|t| t != cell.target) {
            continue;
        }
        writeln!(
            content,
            "{},{},{},{},{},{},{},{},{}",
            cell.target,
            cell.kernel,
            cell.tuned_bandwidth,
            cell.raw_mse_mean,
            cell.raw_mse_se,
            cell.smoothed_mse_mean,
            cell.smoothed_mse_se,
            cell.rect_reference_mse,
            cell.seed
        )
        .expect("string write");
    }
    write_output(args.out.as_deref(), &content)
}

fn cmd_rate(args: RateArgs, file: &HashMap<String, String>) -> Result<(), CliError> {
    let n_list = match optional(file, "n-list", args.n_list)? {
        Some(text) => parse_n_list(&text)?,
        None => vec![100, 200, 400, 800, 1600, 3200],
    };
    let beta = setting(file, "beta", args.beta, 2.0)?;
    let alpha = setting(file, "alpha", args.alpha, 1.0)?;
    let kernel_name = parse_kernel(&setting(file, "kernel", args.kernel, "k1".to_string())?)?;
    let config = SimulationConfig {
        x_range: (
            setting(file, "x-min", args.x_min, -2.0)?,
            setting(file, "x-max", args.x_max, 2.0)?,
        ),
        noise_variance: setting(file, "noise-variance", args.noise_variance, 0.5)?,
        target: parse_target(&setting(file, "target", args.target, "f".to_string())?)?,
        kernel_name,
        a: setting(file, "a", args.a, 0.2)?,
        seed: setting(file, "seed", args.seed, 0)?,
        replications: setting(file, "replications", args.replications, 50)?,
        grid_size: setting(file, "grid-size", args.grid_size, 1001)?,
        l0: setting(file, "l0", args.l0, 1.0)?,
        ..SimulationConfig::default()
    };
    let study = rate_study(&config, beta, &n_list, alpha)?;
    let mut content = format!("# slope = {}\nn,mean_mse\n", study.slope);
    for (n, m) in study.n_list.iter().zip(&study.mean_mse) {
        writeln!(content, "{n},{m}").expect("string write");
    }
    write_output(args.out.as_deref(), &content)
}

fn cmd_kernels(args: KernelsArgs, file: &HashMap<String, String>) -> Result<(), CliError> {
    let a = setting(file, "a", args.a, 0.2)?;
    let mut content = String::from(
        "kernel,a,singular,continuous_off_origin,support_radius,\
         square_integrable,square_integral,c0,delta\n",
    );
    for name in [
        KernelName::K1,
        KernelName::K2,
        KernelName::K3,
        KernelName::Rect,
    ] {
        let kernel = make_builtin(name, a, 1)?;
        let sq = check_square_integrable(&kernel, 1)?;
        let integral = match sq.value {
            Some(v) => v.to_string(),
            None => String::new(),
        };
        let (c0, delta) = match singularity_bound(&kernel) {
            Ok(bound) => (bound.c0.to_string(), bound.delta.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        writeln!(
            content,
            "{},{},{},{},{},{},{integral},{c0},{delta}",
            kernel.name(),
            kernel.exponent(),
            kernel.is_singular(),
            kernel.continuous_off_origin(),
            kernel.support_radius(),
            sq.finite
        )
        .expect("string write");
    }
    write_output(args.out.as_deref(), &content)
}
