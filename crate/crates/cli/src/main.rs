//! `tam`: anomaly injection, graph truncation, training, scoring and
//! evaluation from the command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tam_core::Error;

#[derive(Parser)]
#[command(name = "tam", version, about = "Unsupervised graph anomaly detection via truncated affinity maximization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inject structural and/or contextual anomalies into a graph.
    Inject(InjectArgs),
    /// Print graph statistics and per-depth truncation statistics.
    Stats(StatsArgs),
    /// Write the nested truncated edge lists of one truncation run.
    Truncate(TruncateArgs),
    /// Train and score, writing scores, statistics, a report and timings.
    Run(RunArgs),
    /// Evaluate score files against a labeled graph.
    Eval(EvalArgs),
    /// Run variants on the synthetic one-class-homophily benchmark.
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct InjectArgs {
    /// Input graph prefix (reads PREFIX.edges and PREFIX.attrs.csv).
    #[arg(long)]
    pub input: PathBuf,
    /// Output graph prefix.
    #[arg(long)]
    pub output: PathBuf,
    /// Cliques to inject, as COUNTxSIZE (e.g. 2x15).
    #[arg(long, value_name = "PxQ")]
    pub structural: Option<String>,
    /// Number of contextual anomalies.
    #[arg(long, value_name = "N")]
    pub contextual: Option<usize>,
    /// Candidate pool size for contextual anomalies.
    #[arg(long, default_value_t = 50)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Truncation depth.
    #[arg(long = "K", default_value_t = 4)]
    pub depth: usize,
    /// Independent truncation runs.
    #[arg(long = "T", default_value_t = 1)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct TruncateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output prefix; depth k goes to PREFIX.k<k>.edges.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long = "K", default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct RunArgs {
    /// key = value configuration file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long = "T")]
    pub runs: Option<usize>,
    #[arg(long = "K")]
    pub depth: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long = "lr")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Hidden sizes as H1,H2.
    #[arg(long)]
    pub hidden: Option<String>,
    /// Comma-separated master seeds.
    #[arg(long)]
    pub seeds: Option<String>,
    /// tam, raw-affinity, degree, tam-t, single-scale:K, raw-graph,
    /// edge-drop[:RATE], similarity-cut[:RATE].
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Maximum concurrent trainings.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Also write every trained network under OUT/models.
    #[arg(long)]
    pub save_models: bool,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Labeled graph prefix (PREFIX.labels, optional PREFIX.types).
    #[arg(long)]
    pub input: PathBuf,
    /// Score files (node_id,score), one per run.
    #[arg(long, required = true, num_args = 1..)]
    pub scores: Vec<PathBuf>,
    /// Write the report as CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "0,1,2,3,4")]
    pub seeds: String,
    #[arg(long, default_value = "tam,raw-affinity,raw-graph")]
    pub variants: String,
    #[arg(long = "T", default_value_t = 3)]
    pub runs: usize,
    #[arg(long = "K", default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long = "lr", default_value_t = 1e-5)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    #[arg(long, default_value = "64,64")]
    pub hidden: String,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Share of each anomaly's attributes replaced by the normal mean.
    #[arg(long, default_value_t = 0.0)]
    pub camouflage: f64,
    /// Write the benchmark graph for the first seed to this prefix and exit.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Write per-seed results as CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status per error class.
fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Config(_) => 2,
        Error::Io { .. } => 3,
        Error::Parse { .. }
        | Error::RaggedAttributes { .. }
        | Error::EndpointOutOfRange { .. }
        | Error::RowCount { .. }
        | Error::Model { .. } => 4,
        Error::IsolatedNode { .. }
        | Error::Shape(_)
        | Error::LengthMismatch { .. }
        | Error::MissingLabels
        | Error::DegenerateLabels { .. }
        | Error::InsufficientNodes { .. }
        | Error::GraphMismatch { .. } => 5,
        Error::NonFiniteLoss { .. } | Error::Member { .. } => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inject(args) => commands::inject(args),
        Command::Stats(args) => commands::stats(args),
        Command::Truncate(args) => commands::truncate(args),
        Command::Run(args) => commands::run(args),
        Command::Eval(args) => commands::eval(args),
        Command::Bench(args) => commands::bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
