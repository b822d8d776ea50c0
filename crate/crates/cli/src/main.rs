//! `gph`: generate samples, estimate and orient tangent frames, build
//! distance matrices, compute persistence and run the theory checks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Persistent homology in the oriented Grassmann bundle.
#[derive(Parser, Debug)]
#[command(name = "gph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic sample (and analytic frames where available).
    #[command(subcommand)]
    Gen(Generator),
    /// Estimate tangent frames by k-NN local PCA.
    Frames(FramesArgs),
    /// Orient a frame field along the k-NN graph (exit 4 if impossible).
    Orient(OrientArgs),
    /// Build a Euclidean or d_c distance matrix (GPDM file).
    Distmat(DistmatArgs),
    /// Vietoris-Rips persistence of a GPDM matrix (CSV + SVG).
    Ph(PhArgs),
    /// Bottleneck distance between two diagram files, per degree.
    Compare(CompareArgs),
    /// Run the numerical checks (JSON lines plus a summary table).
    Checks(ChecksArgs),
}

#[derive(Subcommand, Debug)]
enum Generator {
    /// Torus ((R + r cos v) cos u, (R + r cos v) sin u, r sin v).
    Torus(TorusArgs),
    /// Ellipse (a cos t, b sin t) at n equispaced parameters.
    Ellipse(EllipseArgs),
    /// Möbius band of half-width w around a circle of radius R.
    Mobius(MobiusArgs),
    /// Double-gyre trajectory, written as `t,x,y` rows.
    Doublegyre(GyreArgs),
    /// Delay embedding of one column of a `t,x,y` series.
    Delay(DelayArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Sampling {
    Uniform,
    Grid,
}

#[derive(Args, Debug)]
struct TorusArgs {
    #[arg(long = "R", default_value_t = 1.0)]
    big_r: f64,
    #[arg(long = "r", default_value_t = 0.25)]
    small_r: f64,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Sampling::Uniform)]
    sampling: Sampling,
    #[arg(long)]
    out: PathBuf,
    /// Analytic frame file [default: OUT with extension `frames`].
    #[arg(long)]
    frames_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EllipseArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    frames_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MobiusArgs {
    #[arg(long = "R", default_value_t = 1.0)]
    big_r: f64,
    #[arg(long, default_value_t = 0.3)]
    w: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GyreArgs {
    #[arg(long = "C", default_value_t = 0.1)]
    c: f64,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    /// Angular frequency [default: π/5].
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    x0: f64,
    #[arg(long, default_value_t = 0.625)]
    y0: f64,
    #[arg(long = "T", default_value_t = 10000.0)]
    t_end: f64,
    #[arg(long, default_value_t = 20000)]
    n: usize,
    /// Largest RK4 step.
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Observable {
    X,
    Y,
}

#[derive(Args, Debug)]
struct DelayArgs {
    /// `t,x,y` series from `gen doublegyre`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Observable::X)]
    column: Observable,
    /// Delay in time units, rounded to a whole number of samples.
    #[arg(long, default_value_t = 5.0)]
    tau: f64,
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Intrinsic dimension recorded for the embedded cloud.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PointsArgs {
    /// Point file (CSV, whitespace-separated, or `.off`).
    #[arg(long)]
    points: PathBuf,
    /// Intrinsic dimension d of the sampled manifold.
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args, Debug)]
struct FramesArgs {
    #[command(flatten)]
    input: PointsArgs,
    /// Neighbors per point [default: from the sample size].
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OrientArgs {
    #[command(flatten)]
    input: PointsArgs,
    #[arg(long)]
    frames: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    /// Reach estimate; edges longer than half of it are reported.
    #[arg(long)]
    reach: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Report file [default: OUT with `.report.txt` appended].
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Metric {
    Euclidean,
    Dc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FramesOn {
    Full,
    Subsample,
}

#[derive(Args, Debug)]
struct DistmatArgs {
    #[command(flatten)]
    input: PointsArgs,
    #[arg(long, value_enum, default_value_t = Metric::Dc)]
    metric: Metric,
    /// Oriented frames of the full cloud (dc with --frames-on full).
    #[arg(long)]
    frames: Option<PathBuf>,
    /// Where frames come from: the given file, or estimation on the subsample.
    #[arg(long, value_enum, default_value_t = FramesOn::Full)]
    frames_on: FramesOn,
    /// Neighbors for --frames-on subsample.
    #[arg(long)]
    k: Option<usize>,
    /// `auto` or a positive number.
    #[arg(long, default_value = "auto")]
    c: String,
    /// Points kept, uniformly without replacement [default: all].
    #[arg(long)]
    subsample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PhArgs {
    /// GPDM distance matrix.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    maxdim: usize,
    /// Largest filtration value [default: enclosing radius].
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Diagram plot [default: OUT with extension `svg`].
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    /// Also write `degree,bottleneck` rows here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChecksArgs {
    /// Keep checks whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    /// Write the JSON lines here and the table to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("GP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("GP_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("gph: {msg}");
        return ExitCode::from(commands::EXIT_USAGE);
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gph: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
