use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Trace-driven simulator for demand-aware leaf-spine topologies.
#[derive(Debug, Parser)]
#[command(name = "tmtnet", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic trace or demand file.
    #[command(subcommand)]
    Generate(Generate),
    /// Print the demand-graph statistics of a trace.
    Stats(StatsArgs),
    /// Serve one trace with one algorithm and write its report.
    Run(RunArgs),
    /// Run every combination of traces, algorithms, windows and rates.
    Sweep(SweepArgs),
    /// Split a k-regular network (JSON) into k matchings (JSON).
    Decompose(DecomposeArgs),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Disjoint stars; requests go between a centre and one of its leaves.
    Stars {
        #[arg(long, default_value_t = 32)]
        stars: usize,
        #[arg(long, default_value_t = 31)]
        leaves: usize,
        /// Require stars * (leaves + 1) to equal this.
        #[arg(long)]
        n: Option<usize>,
        /// Pick leaves uniformly instead of proportionally to 1/i.
        #[arg(long)]
        uniform_leaves: bool,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Source and destination uniform over all nodes.
    Uniform {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Source and destination each Zipf-distributed over a random ranking.
    Zipf {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        exponent: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Forest-shaped demand matrix (SRC DST PROB lines).
    Forest {
        #[arg(long)]
        n: usize,
        /// Maximum children per node.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GenCommon {
    #[arg(long, default_value_t = 1_000_000)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Node count; inferred from the largest id when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Print JSON instead of a table row.
    #[arg(long)]
    pub json: bool,
}

/// Flags shared by `run` and `sweep`. Unset flags fall back to the config
/// file, then to the built-in defaults.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON file with any of the flags below, using snake_case keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Node count; inferred from the trace when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Spine switches, i.e. matchings per network [default: 4].
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Requests excluded from `apl` at the start [default: the window size].
    #[arg(long)]
    pub warmup: Option<usize>,
    /// Cache cost parameter for bma [default: 6].
    #[arg(long)]
    pub alpha: Option<u32>,
    /// Misses before bma caches a pair [default: alpha].
    #[arg(long)]
    pub threshold: Option<u32>,
    /// Random expanders drawn for the best-of selection [default: 10].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output directory [default: $TMTNET_OUT, else ./out].
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Trace file, or a generator spec such as `gen:stars,length=1000000,seed=7`.
    #[arg(long)]
    pub trace: Option<String>,
    /// egotrees, kmatching, bma, expander or static-egotrees.
    #[arg(long)]
    pub algo: Option<String>,
    /// Requests between reconfigurations, or `never` [default: 10000].
    #[arg(long)]
    pub rate: Option<String>,
    /// Requests in the demand window [default: 20000].
    #[arg(long)]
    pub window: Option<usize>,
    /// Base name of the report files [default: derived from the run].
    #[arg(long)]
    pub name: Option<String>,
    /// Also write the per-window busiest-node activity.
    #[arg(long)]
    pub activity: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Trace file or generator spec; repeat for several traces.
    #[arg(long = "trace")]
    pub traces: Vec<String>,
    /// Algorithms, comma separated [default: egotrees,kmatching].
    #[arg(long, value_delimiter = ',')]
    pub algos: Vec<String>,
    /// Update rates [default: 5000,10000,20000,40000,100000].
    #[arg(long, value_delimiter = ',')]
    pub rates: Vec<String>,
    /// Window sizes [default: 5000,10000,20000,40000,100000].
    #[arg(long, value_delimiter = ',')]
    pub windows: Vec<usize>,
    /// Concurrent runs [default: available cores].
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}
