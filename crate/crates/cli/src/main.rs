//! Umbrella command-line interface: simulation, the lead-lag test,
//! spot-volatility bands, quadratic-form diagnostics and the rejection-rate
//! study.
//!
//! Exit codes: 0 on success, 2 on data errors, 3 on configuration errors.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};

use hfmax::error::Error;
use hfmax::experiments::{ExperimentConfig, RejectionRow};
use hfmax::io as hio;
use hfmax::leadlag::{BootstrapConfig, ContrastOptions, LagGrid, Multiplier};
use hfmax::qform::{self, MultiplierLaw, QuadFormSpec};
use hfmax::seed::Seed;
use hfmax::sim::{self, LeadLagModel, SamplingScheme, Volatility};
use hfmax::spotvol::{self, Kernel, SpotVolConfig};

#[derive(Parser)]
#[command(name = "hfmax", version, about = "Max-statistics inference for high-frequency data")]
struct Cli {
    /// Master seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Stream id selecting an independent substream of the master seed.
    #[arg(long, global = true, default_value_t = 0)]
    stream: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the lagged-correlation model and write asset,time,value CSV
    /// plus a JSON metadata sidecar.
    Simulate(SimulateArgs),
    /// Run the lead-lag absence test on tick data (asset,time,price CSV).
    #[command(name = "llag-test")]
    LlagTest(LlagTestArgs),
    /// Kernel spot-volatility estimate with a uniform confidence band.
    Spotvol(SpotvolArgs),
    /// Moment/cumulant diagnostics for Gaussian quadratic-form maxima.
    Qform(QformArgs),
    /// Rejection-rate study over sampling scenarios and correlations.
    Table1(Table1Args),
    /// Convert a report JSON (test report or band result) to plot CSV.
    Plotdata(PlotdataArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Synchronous equidistant step h.
    #[arg(long, conflicts_with_all = ["m", "base_step"])]
    h: Option<f64>,
    /// Non-synchronous: points kept per asset from the base grid.
    #[arg(long, requires = "base_step")]
    m: Option<usize>,
    /// Non-synchronous: base grid step.
    #[arg(long)]
    base_step: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long, default_value_t = 0.1)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.0)]
    x01: f64,
    #[arg(long, default_value_t = 0.0)]
    x02: f64,
    /// Horizon T.
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Output CSV path; a `.meta.json` sidecar is written alongside.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LlagTestArgs {
    /// Tick data CSV with columns asset,time,price.
    #[arg(long)]
    data: PathBuf,
    /// Lag grid step.
    #[arg(long)]
    grid_step: f64,
    /// Lag grid radius: lags are {k step : |k step| <= radius}.
    #[arg(long)]
    grid_radius: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap replications.
    #[arg(long = "R", default_value_t = 999)]
    replications: usize,
    #[arg(long, value_parser = parse_multiplier, default_value = "rademacher")]
    multiplier: Multiplier,
    /// Horizon T (defaults to the largest observed time).
    #[arg(long)]
    horizon: Option<f64>,
    /// Treat overlaps shorter than this as empty (for noisy timestamps).
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Multiply statistics by sqrt(n) with this n.
    #[arg(long)]
    scale_n: Option<usize>,
    /// Report JSON output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpotvolArgs {
    /// Single-asset CSV: time,price (or asset,time,price).
    #[arg(long)]
    data: PathBuf,
    /// Bandwidth.
    #[arg(long)]
    h: f64,
    #[arg(long, value_parser = Kernel::from_name, default_value = "epanechnikov")]
    kernel: Kernel,
    /// Boundary trim a_n.
    #[arg(long = "an")]
    boundary_trim: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Monte Carlo draws for the Gaussian-analog quantile.
    #[arg(long = "R", default_value_t = 10_000)]
    mc_draws: usize,
    /// Evaluation grid step (default h/20).
    #[arg(long)]
    eval_step: Option<f64>,
    /// Declared Hölder exponent for the undersmoothing diagnostics.
    #[arg(long)]
    gamma: Option<f64>,
    /// Band CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the band as JSON (usable by `plotdata`).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct QformArgs {
    /// Specification JSON: {"gammas": [...]} or {"sigma": ..., "a": [...]}.
    #[arg(long)]
    spec: PathBuf,
    /// Gaussian-analog covariance as dense CSV (defaults to the exact
    /// quadratic-form covariance of the spec).
    #[arg(long)]
    cov: Option<PathBuf>,
    /// Monte Carlo draws for the Kolmogorov distance (0 skips it).
    #[arg(long, default_value_t = 0)]
    mc: usize,
    /// Monte Carlo draws for the remainder-one estimate (0 skips it).
    #[arg(long, default_value_t = 0)]
    r1_draws: usize,
    #[arg(long, value_parser = parse_mult_law, default_value = "rademacher")]
    r1_multiplier: MultiplierLaw,
    /// Report JSON output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Table1Args {
    /// Experiment config JSON; defaults to the desk-scale reference design.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the per-cell Monte Carlo iteration count.
    #[arg(long)]
    n_mc: Option<usize>,
    /// Override the bootstrap replication count.
    #[arg(long = "R")]
    replications: Option<usize>,
    /// Output prefix: writes <out>.csv (streamed) and <out>.json.
    #[arg(long)]
    out: PathBuf,
    /// Print the default config JSON and exit.
    #[arg(long, action = ArgAction::SetTrue)]
    print_default_config: bool,
}

#[derive(Args)]
struct PlotdataArgs {
    /// Report JSON (test report or band result).
    #[arg(long)]
    report: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_multiplier(s: &str) -> Result<Multiplier, String> {
    match s.to_ascii_lowercase().as_str() {
        "rademacher" => Ok(Multiplier::Rademacher),
        "gaussian" => Ok(Multiplier::Gaussian),
        "identity" => Ok(Multiplier::Identity),
        other => Err(format!("unknown multiplier '{other}'")),
    }
}

fn parse_mult_law(s: &str) -> Result<MultiplierLaw, String> {
    match s.to_ascii_lowercase().as_str() {
        "rademacher" => Ok(MultiplierLaw::Rademacher),
        "gaussian" => Ok(MultiplierLaw::Gaussian),
        other => Err(format!("unknown multiplier '{other}'")),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: could not configure {} threads: {e}", cli.threads);
            std::process::exit(3);
        }
    }

    let seed = Seed::with_stream(cli.seed, cli.stream);
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args, seed),
        Command::LlagTest(args) => cmd_llag_test(args, seed),
        Command::Spotvol(args) => cmd_spotvol(args, seed),
        Command::Qform(args) => cmd_qform(args, seed),
        Command::Table1(args) => cmd_table1(args, seed),
        Command::Plotdata(args) => cmd_plotdata(args),
    };

    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>, Error> {
    Ok(BufReader::new(File::open(path)?))
}

fn cmd_simulate(args: SimulateArgs, seed: Seed) -> Result<(), Error> {
    let scheme = match (args.h, args.m, args.base_step) {
        (Some(h), None, None) => SamplingScheme::equidistant(h, args.horizon)?,
        (None, Some(m), Some(base)) => SamplingScheme::subsample(m, base, args.horizon, seed.child(0))?,
        _ => {
            return Err(Error::Config(
                "choose either --h (synchronous) or --m with --base-step (non-synchronous)".into(),
            ))
        }
    };
    let model = LeadLagModel {
        x0_1: args.x01,
        x0_2: args.x02,
        sigma1: Volatility::constant(args.sigma1),
        sigma2: Volatility::constant(args.sigma2),
        rho: args.rho,
        theta: args.theta,
        horizon: args.horizon,
    };
    let path = sim::simulate_leadlag(&model, &scheme, seed.child(1))?;
    hio::write_pathpair_csv(create(&args.out)?, &path)?;
    let meta = hio::SimulationMetadata {
        kind: path.scheme.kind.clone(),
        horizon: args.horizon,
        model,
        seed,
    };
    let meta_path = args.out.with_extension("meta.json");
    hio::write_json(create(&meta_path)?, &meta)?;
    eprintln!("wrote {} and {}", args.out.display(), meta_path.display());
    Ok(())
}

fn cmd_llag_test(args: LlagTestArgs, seed: Seed) -> Result<(), Error> {
    let path = hio::read_pathpair_csv(open(&args.data)?, args.horizon)?;
    let grid = LagGrid::symmetric(args.grid_step, args.grid_radius)?;

    // Grid-fineness advisory: a lag step above the smallest observation
    // interval cannot resolve the finest lags the data could identify.
    let min_width = path
        .scheme
        .times1
        .windows(2)
        .chain(path.scheme.times2.windows(2))
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if args.grid_step > min_width * (1.0 + 1e-9) {
        eprintln!(
            "warning: grid step {} exceeds the smallest observation interval {min_width:.3e}",
            args.grid_step
        );
    }

    let cfg = BootstrapConfig {
        replications: args.replications,
        multiplier: args.multiplier,
        seed,
        scale_by_sqrt_n: args.scale_n.is_some(),
        n_scale: args.scale_n.unwrap_or(0),
        ..BootstrapConfig::default()
    };
    let opts = ContrastOptions { epsilon: args.epsilon };
    let report = hfmax::leadlag::run_test(&path, &grid, args.alpha, &cfg, &opts)?;
    if report.quantile.is_infinite() {
        eprintln!(
            "warning: alpha = {} is too small for R = {} (quantile rank {} > R); quantile reported as inf",
            args.alpha, args.replications, report.quantile_rank
        );
    }
    hio::write_json(create(&args.out)?, &report)?;
    eprintln!(
        "T = {:.6e}, p = {:.4}, reject at {}%: {} (argmax lag {})",
        report.statistic,
        report.p_value,
        100.0 * args.alpha,
        report.reject,
        report.argmax_theta
    );
    Ok(())
}

fn cmd_spotvol(args: SpotvolArgs, seed: Seed) -> Result<(), Error> {
    let path = hio::read_single_asset_csv(open(&args.data)?)?;
    let (n, _horizon) = path.validate()?;
    let cfg = SpotVolConfig {
        bandwidth: args.h,
        kernel: args.kernel,
        boundary_trim: args.boundary_trim,
        eval_step: args.eval_step,
        alpha: args.alpha,
        mc_draws: args.mc_draws,
        seed,
        gamma: args.gamma,
    };
    if let Some(gamma) = args.gamma {
        let (b1, b2) = spotvol::undersmoothing_diagnostics(n, args.h, gamma);
        if b1 > 1.0 {
            eprintln!("warning: n h^(1+2 gamma) log n = {b1:.3} > 1; the band may be bias-dominated");
        }
        if b2 > 1.0 {
            eprintln!("warning: log^6 n / (n h) = {b2:.3} > 1; the Gaussian approximation may be poor");
        }
    }
    let band = spotvol::uniform_band(&path, &cfg)?;
    hio::write_band_csv(create(&args.out)?, &band)?;
    if let Some(json_path) = &args.json {
        hio::write_json(create(json_path)?, &band)?;
    }
    let invalid = band.valid.iter().filter(|v| !**v).count();
    eprintln!(
        "band over {} points, quantile {:.4}, {} invalid point(s)",
        band.eval_times.len(),
        band.quantile,
        invalid
    );
    Ok(())
}

/// On-disk quadratic-form specification.
#[derive(serde::Deserialize)]
struct QformSpecFile {
    gammas: Option<Vec<Vec<Vec<f64>>>>,
    sigma: Option<Vec<Vec<f64>>>,
    a: Option<Vec<Vec<Vec<f64>>>>,
}

fn dense(rows: &[Vec<f64>]) -> Result<nalgebra::DMatrix<f64>, Error> {
    let nr = rows.len();
    if nr == 0 || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Data("matrix rows must be nonempty and rectangular".into()));
    }
    Ok(nalgebra::DMatrix::from_fn(nr, rows[0].len(), |i, j| rows[i][j]))
}

#[derive(serde::Serialize)]
struct QformReport {
    diagnostics: qform::DiagnosticsReport,
    remainders: qform::RemainderTerms,
    mc_kolmogorov: Option<qform::MaxDistanceEstimate>,
    /// Monte Carlo estimate only; the first remainder has no closed form.
    r1_estimate: Option<f64>,
    seed: Seed,
}

fn cmd_qform(args: QformArgs, seed: Seed) -> Result<(), Error> {
    let file: QformSpecFile = hio::read_json(open(&args.spec)?)?;
    let spec = match (&file.gammas, &file.sigma, &file.a) {
        (Some(gs), None, None) => {
            let mats = gs.iter().map(|g| dense(g)).collect::<Result<Vec<_>, _>>()?;
            QuadFormSpec::from_gammas(mats)?
        }
        (None, Some(sigma), Some(a)) => {
            let sigma = dense(sigma)?;
            let mats = a.iter().map(|g| dense(g)).collect::<Result<Vec<_>, _>>()?;
            QuadFormSpec::from_sigma_and_a(&sigma, &mats)?
        }
        _ => {
            return Err(Error::Data(
                "spec JSON must contain either 'gammas' or both 'sigma' and 'a'".into(),
            ))
        }
    };

    let cov = match &args.cov {
        Some(p) => hio::read_matrix_csv(open(p)?)?,
        None => {
            let d = spec.count();
            nalgebra::DMatrix::from_fn(d, d, |k, l| {
                qform::qf_covariance(&spec.gammas()[k], &spec.gammas()[l]).expect("same dims")
            })
        }
    };

    let diagnostics = qform::diagnostics_report(&spec)?;
    let remainders = qform::theorem_remainders(&spec, &cov)?;
    let mc_kolmogorov = if args.mc > 0 {
        Some(qform::mc_max_kolmogorov(&spec, &cov, args.mc, seed.child(0))?)
    } else {
        None
    };
    let r1_estimate = if args.r1_draws > 0 {
        Some(qform::r1_estimate(&spec, args.r1_multiplier, args.r1_draws, seed.child(1))?)
    } else {
        None
    };
    let report = QformReport {
        diagnostics,
        remainders,
        mc_kolmogorov,
        r1_estimate,
        seed,
    };
    hio::write_json(create(&args.out)?, &report)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_table1(args: Table1Args, seed: Seed) -> Result<(), Error> {
    if args.print_default_config {
        hio::write_json(std::io::stdout().lock(), &ExperimentConfig::default())?;
        return Ok(());
    }
    let mut cfg = match &args.config {
        Some(p) => hio::read_json(open(p)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = args.n_mc {
        cfg.n_mc = n;
    }
    if let Some(r) = args.replications {
        cfg.replications = r;
    }
    if seed.master != 0 || seed.stream != 0 {
        cfg.master_seed = seed.master;
    }

    let csv_path = args.out.with_extension("csv");
    let json_path = args.out.with_extension("json");
    let mut csv_file = create(&csv_path)?;
    writeln!(csv_file, "scenario,rho,alpha,rate,se,n_mc,replications,master_seed")?;

    let flush_rows = |w: &mut BufWriter<File>, rows: &[RejectionRow]| {
        for r in rows {
            let _ = writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.scenario, r.rho, r.alpha, r.rate, r.se, r.n_mc, r.replications, r.master_seed
            );
        }
        let _ = w.flush();
    };

    match hfmax::experiments::run_table1_streaming(&cfg, |rows| flush_rows(&mut csv_file, rows)) {
        Ok(table) => {
            hio::write_json(create(&json_path)?, &table)?;
            eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(())
        }
        Err(e) => {
            // Partial rows are already flushed; mark the CSV as aborted.
            let _ = writeln!(csv_file, "# aborted: {e}");
            let _ = csv_file.flush();
            eprintln!("aborted after partial results ({}): {e}", csv_path.display());
            Err(e)
        }
    }
}

fn cmd_plotdata(args: PlotdataArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.report)?;
    let source = hio::PlotSource::from_json_str(&text)?;
    source.write_csv(create(&args.out)?)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}
