//! `sumsets`: exact, rigorous and Monte Carlo computations of missing sums.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sumset_core::Error;

#[derive(Parser)]
#[command(
    name = "sumsets",
    version,
    about = "Missing sums of random sumsets A+A"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "SUMSETS_WORKERS", global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact P(i, j ∉ A+A), optionally with the Fibonacci closed form.
    PairProb(PairProbArgs),
    /// The limiting variance series truncated after pairs with j ≤ terms.
    Variance(VarianceArgs),
    /// Enumerate prefix shards into checkpoint files.
    Bounds(BoundsArgs),
    /// Merge a complete set of checkpoints into bounds on z.
    BoundsCombine(CombineArgs),
    /// Bounds on y, m or w from bounds on z.
    Derive(DeriveArgs),
    /// Monte Carlo tallies with exact binomial intervals.
    Montecarlo(MonteCarloArgs),
    /// Conditional means of the first present sum and the longest full run.
    Fringe(FringeArgs),
    /// Geometric and Poisson models.
    #[command(subcommand)]
    Models(ModelsCommand),
    /// Exact distribution of M for a window by enumeration.
    Brute(BruteArgs),
    /// Configuration probabilities and a bracket for their decay rate.
    Lambda(LambdaArgs),
    /// Bounds on P(k+1, …, k+m ∉ A+A).
    Consecutive(ConsecutiveArgs),
}

#[derive(Args)]
pub struct PairProbArgs {
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub j: u32,
    #[arg(long)]
    pub closed_form: bool,
    #[arg(long, default_value = "pair-prob.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VarianceArgs {
    #[arg(long, default_value_t = 300)]
    pub terms: u32,
    #[arg(long, default_value = "variance.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u32,
    /// Gray positions are 1..n1; the bits n1..n select the shard.
    #[arg(long)]
    pub n1: Option<u32>,
    /// Shard indices to run (repeatable); all shards when omitted.
    #[arg(long = "shard", conflicts_with = "all")]
    pub shards: Vec<u64>,
    #[arg(long)]
    pub all: bool,
    /// Checkpoint directory.
    #[arg(long, default_value = "bounds")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CombineArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "z.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DeriveArgs {
    /// y, m or w.
    #[arg(long)]
    pub kind: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MonteCarloArgs {
    /// z, y or m.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub samples: u64,
    #[arg(long, default_value_t = 256)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.999)]
    pub level: f64,
    #[arg(long, default_value = "montecarlo.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FringeArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "fringe.csv")]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum ModelsCommand {
    /// λ-intervals where the model m has a divot.
    DivotScan(DivotScanArgs),
    /// z, y, m of one model.
    Curve(CurveArgs),
    /// Least-squares geometric λ for an estimates file.
    Fit(FitArgs),
}

#[derive(Args)]
pub struct DivotScanArgs {
    /// geometric or poisson.
    #[arg(long, default_value = "geometric")]
    pub family: String,
    #[arg(long, default_value_t = 7)]
    pub at: usize,
    /// bimodal or two-sided.
    #[arg(long, default_value = "bimodal")]
    pub rule: String,
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    #[arg(long, default_value = "divot-scan.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CurveArgs {
    #[arg(long, default_value = "geometric")]
    pub family: String,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 31)]
    pub kmax: usize,
    #[arg(long, default_value = "curve.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FitArgs {
    /// Estimates CSV (`k,count,estimate,ci_lower,ci_upper`).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Weight each k by the inverse squared interval half-width.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, default_value_t = 31)]
    pub kmax: usize,
    #[arg(long, default_value = "fit.json")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BruteArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value = "brute.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct LambdaArgs {
    /// Offsets such as 0,1,3.
    #[arg(long)]
    pub config: String,
    #[arg(long, default_value_t = 0)]
    pub kmin: u32,
    #[arg(long)]
    pub kmax: u32,
    #[arg(long, default_value = "lambda.csv")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ConsecutiveArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value = "consecutive.csv")]
    pub out: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Parse { .. } => 2,
        Error::Capacity(_) => 3,
        Error::Checkpoint { .. } | Error::Coverage(_) => 4,
        Error::Consistency(_) | Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers.filter(|&w| w > 0) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    let result = match cli.command {
        Command::PairProb(a) => commands::pair_prob(a),
        Command::Variance(a) => commands::variance(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::BoundsCombine(a) => commands::bounds_combine(a),
        Command::Derive(a) => commands::derive(a),
        Command::Montecarlo(a) => commands::montecarlo(a),
        Command::Fringe(a) => commands::fringe(a),
        Command::Models(ModelsCommand::DivotScan(a)) => commands::divot_scan(a),
        Command::Models(ModelsCommand::Curve(a)) => commands::curve(a),
        Command::Models(ModelsCommand::Fit(a)) => commands::fit(a),
        Command::Brute(a) => commands::brute(a),
        Command::Lambda(a) => commands::lambda(a),
        Command::Consecutive(a) => commands::consecutive(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sumsets: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
