use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use detach::generator::{DEFAULT_LINKS_PER_BRIDGE, REFERENCE_MIX, REFERENCE_WEIGHT_A, REFERENCE_WEIGHT_B};
use detach::optimizer::{DEFAULT_EVAL_TRIALS, DEFAULT_GREEDY_TRIALS, DEFAULT_TERMINAL_TRIALS};
use detach::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "detach", version, about = "Estimate and reduce information spread across overlapping circles")]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output location: a directory for `generate`, a circle file for
    /// `optimize`, a stats file for `stats`, a CSV file for `bench`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random circle collection with Beta weights and its stats.
    Generate(GenerateArgs),
    /// Descriptive statistics of a circle file.
    Stats(StatsArgs),
    /// Expected proportional outside influence of a circle file.
    Epoi(EpoiArgs),
    /// Choose detachments that lower the EPOI.
    Optimize(OptimizeArgs),
    /// Min-cut against greedy on generated instances, as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Use the reference ratios, mix and Beta(20, 80) weights.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "gamma"])]
    paper_profile: bool,
    /// Links per bridge of the reference profile.
    #[arg(long, default_value_t = DEFAULT_LINKS_PER_BRIDGE, requires = "paper_profile")]
    links_per_bridge: f64,
    /// Vertices per circle.
    #[arg(long, required_unless_present = "paper_profile")]
    alpha: Option<f64>,
    /// Vertices per bridge.
    #[arg(long, required_unless_present = "paper_profile")]
    beta: Option<f64>,
    /// Vertices per bridge-block link.
    #[arg(long, required_unless_present = "paper_profile")]
    gamma: Option<f64>,
    /// Share of the size-proportional circle choice.
    #[arg(long, default_value_t = REFERENCE_MIX)]
    mix: f64,
    #[arg(long, default_value_t = REFERENCE_WEIGHT_A)]
    weight_a: f64,
    #[arg(long, default_value_t = REFERENCE_WEIGHT_B)]
    weight_b: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatsFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long)]
    circles: PathBuf,
    /// Defaults to the extension of --out, else JSON.
    #[arg(long, value_enum)]
    format: Option<StatsFormat>,
}

/// Where edge weights come from. A weight file may be combined with either
/// fill policy, which then covers the pairs the file leaves out.
#[derive(Args, Debug)]
struct WeightArgs {
    /// CSV file with header `u,v,w`.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Same weight on every pair.
    #[arg(long, conflicts_with = "beta")]
    flat_weight: Option<f64>,
    /// Beta(a, b) weights, given as `a,b`.
    #[arg(long, value_parser = parse_pair)]
    beta: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Circle file (JSON).
    #[arg(long)]
    circles: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
    /// Source distribution: `uniform` or a JSON file mapping circles to
    /// probabilities.
    #[arg(long, default_value = "uniform")]
    p: String,
}

#[derive(Args, Debug)]
struct EpoiArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Monte Carlo cascades per circle.
    #[arg(long, default_value_t = DEFAULT_EVAL_TRIALS)]
    trials: u64,
    /// Enumerate live-edge subgraphs instead of sampling.
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Greedy,
    Mincut,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CapacityArg {
    Unit,
    Weighted,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Number of detachments (greedy and exhaustive).
    #[arg(long, required_if_eq_any = [("method", "greedy"), ("method", "exhaustive")])]
    m: Option<usize>,
    /// Monte Carlo cascades per circle for every EPOI evaluation.
    #[arg(long, default_value_t = DEFAULT_EVAL_TRIALS)]
    trials: u64,
    /// Greedy scores candidates exactly instead of by Monte Carlo.
    #[arg(long)]
    exact: bool,
    /// Min-cut terminals: `largest-influence`, `largest-size` or two circle
    /// ids as `A,B`.
    #[arg(long, default_value = "largest-influence")]
    terminals: String,
    /// Cascades per circle when ranking terminals by influence.
    #[arg(long, default_value_t = DEFAULT_TERMINAL_TRIALS)]
    terminal_trials: u64,
    #[arg(long, value_enum, default_value_t = CapacityArg::Unit)]
    capacity: CapacityArg,
    /// Most subsets the exhaustive search may visit.
    #[arg(long, default_value_t = detach::optimizer::DEFAULT_COMBINATION_CAP)]
    combination_cap: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    /// Cascades per circle for the reported EPOI values.
    #[arg(long, default_value_t = DEFAULT_EVAL_TRIALS)]
    trials: u64,
    /// Cascades per circle for each greedy candidate.
    #[arg(long, default_value_t = DEFAULT_GREEDY_TRIALS)]
    greedy_trials: u64,
    #[arg(long, default_value_t = DEFAULT_TERMINAL_TRIALS)]
    terminal_trials: u64,
    #[arg(long, default_value_t = DEFAULT_LINKS_PER_BRIDGE)]
    links_per_bridge: f64,
    /// Fill the timing columns (the CSV is then no longer reproducible).
    #[arg(long)]
    record_times: bool,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        4
    } else if e.is_malformed_input() {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
