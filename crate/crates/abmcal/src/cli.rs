//! Command-line pipelines: synthetic ticks, ingestion, weight estimation,
//! simulation, stylized-fact reports, calibration, and objective surfaces.
//!
//! Every command is reproducible from its flags plus `--seed`; `--threads`
//! bounds the worker pool and changes wall time only, never results. Each
//! numeric output file gets a `<name>.meta.json` sidecar recording the tool
//! version, seed, and a hash of the effective configuration (no timestamps,
//! so repeated runs produce identical bytes).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::agents::ModelParams;
use crate::dataio::{
    bars_from_csv, bars_from_quotes, bars_to_csv, parse_ticks, synth_ticks, ticks_to_csv,
    tukey_interval, PriceBar, SynthConfig, DAY_END, DAY_START,
};
use crate::engine::{run_replications, run_simulation};
use crate::moments::{stylized_report, DEFAULT_ACF_LAGS};
use crate::objective::{
    bootstrap_covariance, init_free_params, weight_matrix, FreeParamSet, ObjectiveSpec,
    WeightMatrix, WeightsFile,
};
use crate::optimize::{
    confidence_intervals, ga_run, nm_ta_run, CalibrationReport, GaConfig, MsmObjective,
    ThresholdSchedule,
};
use crate::rng::{derive_seed, splitmix64};
use crate::surface::{evaluate_surface, interpolate_grid, points_csv, SurfaceSpec};

/// Simulation and calibration toolkit for an intraday agent-based market
/// model.
#[derive(Debug, Parser)]
#[command(name = "abmcal", version, about)]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic tick CSV from a geometric-random-walk quote
    /// stream.
    Synth(SynthArgs),
    /// Convert a tick CSV into one-minute mid-price bars.
    Ingest(IngestArgs),
    /// Estimate the bootstrap covariance of the five moments and write the
    /// weight matrix.
    Weights(WeightsArgs),
    /// Run one simulation and write its price series.
    Simulate(SimulateArgs),
    /// Run Monte Carlo replications and write stylized-fact report tables.
    Stylized(StylizedArgs),
    /// Calibrate free parameters against a bar series.
    Calibrate(CalibrateArgs),
    /// Sweep the objective over a parameter pair on a Sobol point set.
    Surface(SurfaceArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 5)]
    days: usize,
    #[arg(long, default_value = "2013-11-01")]
    start_date: String,
    #[arg(long, default_value_t = 238.75)]
    mid: f64,
    #[arg(long, default_value_t = 2.0e-5)]
    volatility: f64,
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    #[arg(long, default_value_t = 4.0e-4)]
    spread: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Tick CSV path.
    #[arg(long)]
    ticks: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct WeightsArgs {
    /// Bar CSV path.
    #[arg(long)]
    bars: PathBuf,
    /// Bootstrap block length.
    #[arg(long, default_value_t = 100)]
    b: usize,
    /// Bootstrap sample count.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Model parameter JSON path.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON output path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StylizedArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_ACF_LAGS)]
    max_lag: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Optimizer: `nm-ta` or `ga`.
    #[arg(long)]
    method: String,
    #[arg(long)]
    bars: PathBuf,
    /// Base model parameter JSON (fixed parameters).
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated free parameter names.
    #[arg(long)]
    free: String,
    /// Precomputed weight-matrix JSON; estimated from the bars when absent.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Bootstrap block length when estimating weights here.
    #[arg(long, default_value_t = 100)]
    b: usize,
    /// Bootstrap sample count when estimating weights here.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Iterations (nm-ta) or generations (ga).
    #[arg(long, default_value_t = 250)]
    iters: usize,
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Monte Carlo replications per objective evaluation.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Independent experiments; more than one adds confidence intervals.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long)]
    bars: PathBuf,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    b: usize,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Swept parameter on the x axis.
    #[arg(long)]
    px: String,
    /// Swept parameter on the y axis.
    #[arg(long)]
    py: String,
    /// `lo,hi` for the x axis.
    #[arg(long)]
    range_x: String,
    /// `lo,hi` for the y axis.
    #[arg(long)]
    range_y: String,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Interpolated grid resolution per axis.
    #[arg(long, default_value_t = 50)]
    grid_res: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

fn data_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

/// Parse arguments, execute one subcommand, and return the process exit
/// status: 0 on success, 1 on usage errors, 2 on data or validation errors.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let run = || match run_command(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    match cli.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        None => run(),
    }
}

fn run_command(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Synth(args) => cmd_synth(args),
        Command::Ingest(args) => cmd_ingest(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Stylized(args) => cmd_stylized(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Surface(args) => cmd_surface(args),
    }
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    splitmix64(h)
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    seed: u64,
    config_hash: String,
}

fn write_meta(path: &Path, command: &str, seed: u64, config: &str) -> Result<(), CliError> {
    let meta = Meta {
        tool: "abmcal",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config_hash: format!("{:016x}", fnv64(config.as_bytes())),
    };
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    let meta_path = path.with_file_name(name);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta).map_err(data_err)?)
        .map_err(data_err)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(data_err)?;
        }
    }
    fs::write(path, contents).map_err(data_err)
}

fn load_params(path: &Path) -> Result<ModelParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let params: ModelParams = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("bad parameter file {}: {e}", path.display())))?;
    params.validate().map_err(data_err)?;
    Ok(params)
}

fn load_bars(path: &Path) -> Result<Vec<PriceBar>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let bars = bars_from_csv(&text).map_err(data_err)?;
    if bars.len() < 100 {
        return Err(CliError::Data(format!(
            "bar series too short ({} bars); need at least 100",
            bars.len()
        )));
    }
    Ok(bars)
}

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let start_date = args
        .start_date
        .parse()
        .map_err(|e| CliError::Usage(format!("bad --start-date `{}`: {e}", args.start_date)))?;
    let config = SynthConfig {
        days: args.days,
        start_date,
        initial_mid: args.mid,
        volatility: args.volatility,
        drift: args.drift,
        spread: args.spread,
        seed: args.seed,
    };
    let bad = |v: f64| v.is_nan();
    if bad(config.spread) || bad(config.volatility) || bad(config.initial_mid)
        || config.spread <= 0.0 || config.volatility < 0.0 || config.initial_mid <= 0.0 {
        return Err(CliError::Data("spread and mid must be positive, volatility non-negative".into()));
    }
    let ticks = synth_ticks(&config);
    write_file(&args.out, &ticks_to_csv(&ticks))?;
    write_meta(&args.out, "synth", args.seed, &format!("{config:?}"))?;
    println!("wrote {} ticks to {}", ticks.len(), args.out.display());
    Ok(())
}

fn cmd_ingest(args: &IngestArgs) -> Result<(), CliError> {
    let file = fs::File::open(&args.ticks)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", args.ticks.display())))?;
    let parsed = parse_ticks(std::io::BufReader::new(file)).map_err(data_err)?;
    for (line, message) in &parsed.row_errors {
        eprintln!("warning: {}:{line}: {message}", args.ticks.display());
    }
    if !parsed.was_sorted {
        eprintln!("warning: input was not timestamp-ordered; applied a stable sort");
    }
    let (bars, warnings) = bars_from_quotes(&parsed.records, DAY_START, DAY_END);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if bars.is_empty() {
        return Err(CliError::Data("no bars inside the trading window".into()));
    }
    let prices: Vec<f64> = bars.iter().map(|b| b.mid_price).collect();
    let interval = tukey_interval(&prices).map_err(data_err)?;
    if interval.is_outlier(prices[0]) {
        eprintln!(
            "warning: initial price {} lies outside the outlier interval [{}, {}]",
            prices[0], interval.lo, interval.hi
        );
    }
    write_file(&args.out, &bars_to_csv(&bars))?;
    write_meta(&args.out, "ingest", 0, &format!("{}", args.ticks.display()))?;
    println!(
        "wrote {} bars to {} (outlier interval [{:.4}, {:.4}])",
        bars.len(),
        args.out.display(),
        interval.lo,
        interval.hi
    );
    Ok(())
}

fn cmd_weights(args: &WeightsArgs) -> Result<(), CliError> {
    let bars = load_bars(&args.bars)?;
    let prices: Vec<f64> = bars.iter().map(|b| b.mid_price).collect();
    let log_prices = crate::moments::log_prices(&prices).map_err(data_err)?;
    let boot = bootstrap_covariance(&log_prices, args.b, args.n, args.seed).map_err(data_err)?;
    let w = weight_matrix(&boot.cov).map_err(data_err)?;
    if w.is_ill_conditioned() {
        eprintln!(
            "warning: covariance condition number {:.4e} exceeds 1e8; weights may be unstable",
            w.source_condition_number
        );
    }
    let file = WeightsFile::new(&w, args.b, args.n, args.seed);
    write_file(&args.out, &serde_json::to_string_pretty(&file).map_err(data_err)?)?;
    write_meta(&args.out, "weights", args.seed, &format!("{:?}", (args.b, args.n, &args.bars)))?;
    println!(
        "wrote weight matrix to {} (condition number {:.4e})",
        args.out.display(),
        w.source_condition_number
    );
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let params = load_params(&args.config)?;
    let result = run_simulation(&params, args.seed).map_err(data_err)?;
    write_file(&args.out, &result.to_csv())?;
    write_meta(&args.out, "simulate", args.seed, &serde_json::to_string(&params).unwrap())?;
    if let Some(json_path) = &args.json {
        write_file(json_path, &serde_json::to_string_pretty(&result).map_err(data_err)?)?;
    }
    println!(
        "simulated {} sessions to {} ({} trades)",
        result.sessions(),
        args.out.display(),
        result.trades_per_session.iter().sum::<u32>()
    );
    Ok(())
}

#[derive(Serialize)]
struct StylizedSummary {
    replications: usize,
    sessions: u32,
    pooled_kurtosis: f64,
    fitted_mean: f64,
    fitted_std: f64,
    acf_band: f64,
    returns_acf_lags_outside_band: usize,
    abs_returns_acf_lag1: f64,
}

fn cmd_stylized(args: &StylizedArgs) -> Result<(), CliError> {
    let params = load_params(&args.config)?;
    let results = run_replications(&params, args.seed, args.reps).map_err(data_err)?;
    let report = stylized_report(&results, args.max_lag).map_err(data_err)?;
    fs::create_dir_all(&args.out_dir).map_err(data_err)?;
    let out = |name: &str| args.out_dir.join(name);
    write_file(&out("hist.csv"), &report.histogram_csv())?;
    write_file(&out("qq.csv"), &report.qq_csv())?;
    write_file(&out("acf_returns.csv"), &report.acf_returns.to_csv())?;
    write_file(&out("acf_abs_returns.csv"), &report.acf_abs_returns.to_csv())?;
    let summary = StylizedSummary {
        replications: args.reps,
        sessions: params.t,
        pooled_kurtosis: report.pooled_kurtosis,
        fitted_mean: report.fitted_mean,
        fitted_std: report.fitted_std,
        acf_band: report.acf_returns.band,
        returns_acf_lags_outside_band: report.acf_returns.values[1..]
            .iter()
            .filter(|v| v.abs() > report.acf_returns.band)
            .count(),
        abs_returns_acf_lag1: report.acf_abs_returns.values.get(1).copied().unwrap_or(f64::NAN),
    };
    write_file(&out("summary.json"), &serde_json::to_string_pretty(&summary).map_err(data_err)?)?;
    write_meta(
        &out("summary.json"),
        "stylized",
        args.seed,
        &serde_json::to_string(&params).unwrap(),
    )?;
    println!(
        "stylized report in {} (pooled kurtosis {:.3})",
        args.out_dir.display(),
        report.pooled_kurtosis
    );
    Ok(())
}

fn parse_free(set: &str) -> Result<Vec<&str>, CliError> {
    let names: Vec<&str> = set.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Usage("--free needs at least one parameter name".into()));
    }
    Ok(names)
}

#[allow(clippy::too_many_arguments)]
fn build_objective_spec(
    bars_path: &Path,
    config_path: &Path,
    weights_path: Option<&PathBuf>,
    b: usize,
    n: usize,
    reps: usize,
    seed: u64,
    free_names: &[&str],
) -> Result<ObjectiveSpec, CliError> {
    let bars = load_bars(bars_path)?;
    let prices: Vec<f64> = bars.iter().map(|b| b.mid_price).collect();
    let weights: WeightMatrix = match weights_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
            let file: WeightsFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Data(format!("bad weights file {}: {e}", path.display())))?;
            file.to_weight_matrix().map_err(data_err)?
        }
        None => {
            let log_prices = crate::moments::log_prices(&prices).map_err(data_err)?;
            let boot =
                bootstrap_covariance(&log_prices, b, n, derive_seed(seed, 0xB007)).map_err(data_err)?;
            weight_matrix(&boot.cov).map_err(data_err)?
        }
    };
    let base = load_params(config_path)?;
    let free = FreeParamSet::with_default_bounds(free_names).map_err(data_err)?;
    ObjectiveSpec::from_reference_prices(&prices, weights, reps, base, free).map_err(data_err)
}

#[derive(Serialize)]
struct MultiRunReport {
    method: String,
    free_params: Vec<String>,
    runs: Vec<CalibrationReport>,
    confidence: Vec<crate::optimize::ConfidenceInterval>,
    seed: u64,
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<(), CliError> {
    let free_names = parse_free(&args.free)?;
    let spec = build_objective_spec(
        &args.bars,
        &args.config,
        args.weights.as_ref(),
        args.b,
        args.n,
        args.reps,
        args.seed,
        &free_names,
    )?;
    let method = args.method.as_str();
    if !matches!(method, "nm-ta" | "ga") {
        return Err(CliError::Usage(format!(
            "unknown --method `{method}`; expected `nm-ta` or `ga`"
        )));
    }

    let mut reports = Vec::with_capacity(args.runs);
    for run_idx in 0..args.runs {
        let run_seed = derive_seed(args.seed, run_idx as u64);
        let objective = MsmObjective { spec: &spec, master_seed: run_seed };
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(run_seed, 0x0C0));
        let started = Instant::now();
        let report = match method {
            "nm-ta" => {
                let schedule = ThresholdSchedule {
                    replications: vec![
                        args.reps.saturating_sub(2).max(1),
                        args.reps.saturating_sub(1).max(1),
                        args.reps,
                    ],
                    ..ThresholdSchedule::default()
                };
                let vertices: Vec<Vec<f64>> = (0..=spec.free.len())
                    .map(|_| init_free_params(&spec.free, &mut rng))
                    .collect();
                let result = nm_ta_run(&objective, vertices, args.iters, &schedule, &mut rng)
                    .map_err(data_err)?;
                CalibrationReport {
                    method: "nm-ta".to_string(),
                    free_params: spec.free.names(),
                    best_theta: spec.free.constrain(&result.best_theta),
                    best_f: result.best_f,
                    iterations: result.iterations,
                    trace: result.trace,
                    seed: run_seed,
                    wall_time_s: started.elapsed().as_secs_f64(),
                }
            }
            _ => {
                let config = GaConfig {
                    population_size: args.population,
                    generations: args.iters,
                    replications: args.reps,
                    ..GaConfig::default()
                };
                let result = ga_run(&objective, &config, &mut rng).map_err(data_err)?;
                CalibrationReport {
                    method: "ga".to_string(),
                    free_params: spec.free.names(),
                    best_theta: spec.free.constrain(&result.best_theta),
                    best_f: result.best_f,
                    iterations: result.generations,
                    trace: result.trace_best,
                    seed: run_seed,
                    wall_time_s: started.elapsed().as_secs_f64(),
                }
            }
        };
        println!(
            "run {}/{}: best f = {:.6e} at {:?}",
            run_idx + 1,
            args.runs,
            report.best_f,
            report.best_theta
        );
        reports.push(report);
    }

    let json = if args.runs == 1 {
        serde_json::to_string_pretty(&reports[0]).map_err(data_err)?
    } else {
        let thetas: Vec<Vec<f64>> = reports.iter().map(|r| r.best_theta.clone()).collect();
        let confidence = confidence_intervals(&spec.free.names(), &thetas).map_err(data_err)?;
        for ci in &confidence {
            println!(
                "{}: {:.6} +/- {:.6}  (95% CI [{:.6}, {:.6}])",
                ci.name, ci.mean, ci.half_width, ci.lo, ci.hi
            );
        }
        serde_json::to_string_pretty(&MultiRunReport {
            method: method.to_string(),
            free_params: spec.free.names(),
            runs: reports,
            confidence,
            seed: args.seed,
        })
        .map_err(data_err)?
    };
    write_file(&args.out, &json)?;
    write_meta(
        &args.out,
        "calibrate",
        args.seed,
        &format!("{method} free={} iters={} runs={}", args.free, args.iters, args.runs),
    )?;
    println!("wrote calibration result to {}", args.out.display());
    Ok(())
}

fn parse_range(text: &str, flag: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("{flag} must be `lo,hi`, got `{text}`")));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad {flag} low bound: {e}")))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad {flag} high bound: {e}")))?;
    Ok((lo, hi))
}

fn cmd_surface(args: &SurfaceArgs) -> Result<(), CliError> {
    let spec = build_objective_spec(
        &args.bars,
        &args.config,
        args.weights.as_ref(),
        args.b,
        args.n,
        args.reps,
        args.seed,
        &[&args.px, &args.py],
    )?;
    let base_theta = vec![
        spec.base_params.get(&args.px).map_err(data_err)?,
        spec.base_params.get(&args.py).map_err(data_err)?,
    ];
    let surface_spec = SurfaceSpec {
        param_x: args.px.clone(),
        param_y: args.py.clone(),
        range_x: parse_range(&args.range_x, "--range-x")?,
        range_y: parse_range(&args.range_y, "--range-y")?,
        n_points: args.points,
        replications: args.reps,
        base_theta,
    };
    let points = evaluate_surface(&surface_spec, &spec, args.seed).map_err(data_err)?;
    fs::create_dir_all(&args.out_dir).map_err(data_err)?;
    let points_path = args.out_dir.join("surface_points.csv");
    write_file(&points_path, &points_csv(&points))?;
    let samples: Vec<(f64, f64, f64)> = points.iter().map(|p| (p.x, p.y, p.f)).collect();
    let grid = interpolate_grid(&samples, args.grid_res).map_err(data_err)?;
    write_file(&args.out_dir.join("surface_grid.csv"), &grid.to_csv())?;
    write_meta(
        &points_path,
        "surface",
        args.seed,
        &format!("{}x{} {:?} {:?}", args.px, args.py, surface_spec.range_x, surface_spec.range_y),
    )?;
    let (min, max) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.f), hi.max(p.f)));
    println!(
        "evaluated {} surface points into {} (f range [{:.4e}, {:.4e}])",
        points.len(),
        args.out_dir.display(),
        min,
        max
    );
    Ok(())
}
