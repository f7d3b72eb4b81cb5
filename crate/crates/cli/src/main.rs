use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use krein_core::experiment::{
    decompose_cmd, diagnose_cmd, gen_to_dir, run_experiment, DiagnoseProfile, ExperimentConfig,
};
use krein_core::io::to_sorted_json;
use krein_core::KreinError;
use log::{debug, info};
use serde_json::json;

#[derive(Parser)]
#[command(name = "krein", version, about = "Krein-space kernel learning on non-Euclidean spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample and label a dataset on the hyperbolic plane
    Gen(ExperimentArgs),
    /// Generate, train, and score a decision grid
    Run(ExperimentArgs),
    /// Split a symmetric matrix into two positive semidefinite parts
    Decompose(DecomposeArgs),
    /// Harmonic positive-decomposability diagnostics for a kernel profile
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config (JSON)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled preset: default, panel-200, panel-500, euclidean-control
    #[arg(long)]
    preset: Option<String>,
    /// Overrides the seed in the config
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "krein-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Headerless CSV of a symmetric matrix
    #[arg(long)]
    matrix: PathBuf,
    /// Eigenvalues within [-tol, tol] are treated as zero
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "krein-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// gaussian-circle, tanh-sphere or series
    #[arg(long)]
    profile: String,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Comma-separated cosine coefficients for the series profile
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    coeffs: Option<Vec<f64>>,
    #[arg(long, default_value_t = 200)]
    k_max: usize,
    /// Quadrature nodes; defaults to 20·(K_max + 1)
    #[arg(long)]
    nodes: Option<usize>,
    /// Tail index for the Wiener tail fraction; defaults to min(100, K_max)
    #[arg(long)]
    k0: Option<usize>,
    /// Also write diagnose.json here
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Accepted for symmetry with the other commands; unused
    #[arg(long, hide = true)]
    seed: Option<u64>,
}

enum Failure {
    Usage(String),
    Core(KreinError),
}

impl From<KreinError> for Failure {
    fn from(e: KreinError) -> Self {
        Failure::Core(e)
    }
}

fn init_logging() -> Result<(), Failure> {
    let level = match std::env::var("KREIN_LOG").as_deref() {
        Err(_) | Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        Ok("quiet") => log::LevelFilter::Off,
        Ok(other) => return Err(Failure::Usage(format!("KREIN_LOG must be debug, info or quiet, got {other:?}"))),
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).target(env_logger::Target::Stderr).init();
    Ok(())
}

fn load_config(args: &ExperimentArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => ExperimentConfig::preset(name)?,
        (None, None) => ExperimentConfig::preset("default")?,
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    debug!("config: {} points, seed {}", cfg.total_count(), cfg.seed);
    Ok(cfg)
}

fn print_json(v: &serde_json::Value) -> Result<(), Failure> {
    print!("{}", to_sorted_json(v)?);
    Ok(())
}

fn gen(args: ExperimentArgs) -> Result<(), Failure> {
    let cfg = load_config(&args)?;
    let (data, path) = gen_to_dir(&cfg, &args.out_dir)?;
    let (pos, neg) = data.label_counts();
    info!("wrote {} points to {}", data.labels.len(), path.display());
    print_json(&json!({
        "dataset": path.display().to_string(),
        "n": data.labels.len(),
        "n_positive": pos,
        "n_negative": neg,
        "seed": cfg.seed,
    }))
}

fn run(args: ExperimentArgs) -> Result<(), Failure> {
    let cfg = load_config(&args)?;
    let report = run_experiment(&cfg, &args.out_dir)?;
    info!(
        "{}: train accuracy {:.4}, {} support points, inertia {:?}, {} ms",
        report.learner,
        report.train_accuracy,
        report.n_support,
        report.gram_inertia.counts(),
        report.wall_time_ms
    );
    print_json(&serde_json::to_value(&report).map_err(KreinError::from)?)
}

fn decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let report = decompose_cmd(&args.matrix, args.tol, &args.out_dir)?;
    info!("inertia {:?}, relative reconstruction error {:e}", report.inertia.counts(), report.reconstruction_error);
    print_json(&serde_json::to_value(&report).map_err(KreinError::from)?)
}

fn require(v: Option<f64>, flag: &str, profile: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("profile {profile} needs --{flag}")))
}

fn diagnose(args: DiagnoseArgs) -> Result<(), Failure> {
    let profile = match args.profile.as_str() {
        "gaussian-circle" => DiagnoseProfile::GaussianCircle { lambda: require(args.lambda, "lambda", &args.profile)? },
        "tanh-sphere" => DiagnoseProfile::TanhSphere {
            a: require(args.a, "a", &args.profile)?,
            b: require(args.b, "b", &args.profile)?,
        },
        "series" => DiagnoseProfile::Series {
            coefficients: args.coeffs.ok_or_else(|| Failure::Usage("profile series needs --coeffs".into()))?,
        },
        other => {
            return Err(Failure::Usage(format!(
                "unknown profile {other:?}; expected one of {}",
                DiagnoseProfile::NAMES.join(", ")
            )))
        }
    };
    let report = diagnose_cmd(&profile, args.k_max, args.nodes, args.k0)?;
    info!(
        "{}: min coefficient {:e} at k = {}, pd_certificate = {}",
        report.profile, report.min_coefficient, report.min_index, report.pd_certificate
    );
    if let Some(dir) = &args.out_dir {
        write_report(dir, &report)?;
    }
    print_json(&serde_json::to_value(&report).map_err(KreinError::from)?)
}

fn write_report(dir: &Path, report: &krein_core::harmonic::DiagnosticReport) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(KreinError::from)?;
    krein_core::io::write_json(&dir.join("diagnose.json"), report)?;
    Ok(())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", one_line(first.trim_start_matches("error:")));
            return ExitCode::from(2);
        }
    };
    let result = init_logging().and_then(|()| match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Decompose(a) => decompose(a),
        Command::Diagnose(a) => diagnose(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: usage: {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {}: {}", e.kind(), one_line(&e.to_string()));
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
