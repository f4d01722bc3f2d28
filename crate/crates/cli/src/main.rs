//! `frogsim` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error, 3 failed
//! verification.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "frogsim", version, about = "Frog model on complete graphs: simulation, exact law and bounds")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Master seed; falls back to FROGSIM_SEED, then 0.
    #[arg(long, global = true, env = "FROGSIM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    parallel: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Complete,
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LawKind {
    Xplus,
    Xminus,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchedulingArg {
    Queue,
    Simultaneous,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the auxiliary chain on K_N.
    Simulate {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        /// Record per-round outcomes (single replica only).
        #[arg(long)]
        history: bool,
    },
    /// Run the particle-level frog model on a graph.
    Frog {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphKind::Complete)]
        graph: GraphKind,
        /// Edge-list file (`N M root` header, then `u v` lines); overrides --graph.
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SchedulingArg::Queue)]
        scheduling: SchedulingArg,
        #[arg(long, default_value_t = 1)]
        replicas: u64,
    },
    /// Exact law of V_inf on K_N.
    Exact {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
        /// Also report P(V_inf <= threshold).
        #[arg(long)]
        tail: Option<usize>,
        /// Feasibility bound on N.
        #[arg(long, default_value_t = frogsim::exact::DEFAULT_FEASIBILITY_BOUND)]
        max_n: usize,
    },
    /// Comparison branching processes: extinction probabilities and B+ event.
    Branching {
        #[arg(long, value_enum, default_value_t = LawKind::Xplus)]
        law: LawKind,
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: Option<usize>,
        /// Revisit band; defaults to k- (xminus) or k+ (y).
        #[arg(long)]
        band: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        replicas: u64,
        /// Also estimate P(k- < R+ < inf) (needs --N).
        #[arg(long)]
        bplus: bool,
    },
    /// Asymptotic constants k-, k+, a_k, c' and the limits.
    Constants {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
    },
    /// Evaluate the Chernoff bound chain at round k.
    Chain {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
        /// Round index; defaults to ceil(k-).
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        replicas: u64,
    },
    /// Tail-probability sweep over p and N grids.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        replicas: u64,
        /// sqrt | log:<c> | log2:<c>
        #[arg(long, default_value = "sqrt")]
        threshold: String,
        #[arg(long)]
        cprime: Option<f64>,
    },
    /// Check the pathwise orderings of the coupled processes.
    CoupleCheck {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        replicas: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: u64,
        /// Override k- (defaults to the theory value).
        #[arg(long)]
        k_minus: Option<f64>,
        /// Override k+ (defaults to the theory value).
        #[arg(long)]
        k_plus: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::VerificationFailed) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
