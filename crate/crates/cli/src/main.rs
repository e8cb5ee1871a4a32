//! `hyperec`: sample, project, recover and analyse random d-uniform hypergraphs.

mod commands;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperec::recovery::DEFAULT_BUDGET;

use crate::params::ParamArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, params or input files: exit 2.
    Usage(String),
    /// Search budget or instance size exceeded: exit 3.
    Resource(String),
}

impl From<hyperec::Error> for CliError {
    fn from(e: hyperec::Error) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hyperec",
    version,
    about = "Random hypergraphs seen through their graph projection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a hypergraph from the model (HG format)
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a hypergraph to a graph, or a weighted graph with --weighted
    Project {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a hypergraph from a (weighted) projection
    Recover {
        #[arg(long)]
        algo: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        /// Hidden hypergraph to score against
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Break MAP ties at random with this seed instead of lexicographically
        #[arg(long)]
        tie_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo loss over a range of δ (CSV)
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        delta_from: String,
        #[arg(long, allow_hyphen_values = true)]
        delta_to: String,
        #[arg(long)]
        delta_step: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        algo: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a gnuplot recipe for the CSV to stderr
        #[arg(long)]
        gnuplot_hint: bool,
    },
    /// Minimal preimages of a gadget or a graph file (JSON)
    Ambiguity {
        #[arg(long, value_parser = ["gad", "gadw"])]
        gadget: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
        /// Stop counting minimal preimages here
        #[arg(long, default_value_t = hyperec::ambiguity::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Exhaustively search connected 3-uniform hypergraphs up to this many edges
        #[arg(long)]
        search_max_edges: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Bayes-optimal quantities on a tiny model (JSON)
    Oracle {
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Edge probability as a/b (exact) or a decimal
        #[arg(long)]
        p: String,
        /// Condition on the weighted projection
        #[arg(long)]
        weighted: bool,
        /// Observed graph for the posterior
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Hyperedges for corr, e.g. "0,1,2;3,4,5"
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Posterior,
    Loss,
    Overlap,
    Corr,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HYPEREC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
        CliError::Usage(format!(
            "HYPEREC_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Sample { params, out } => commands::sample(&params, out.as_ref()),
        Command::Project {
            input,
            weighted,
            out,
        } => commands::project(&input, weighted, out.as_ref()),
        Command::Recover {
            algo,
            input,
            d,
            truth,
            budget,
            tie_seed,
            out,
        } => commands::recover(
            &algo,
            &input,
            d,
            truth.as_ref(),
            budget,
            tie_seed,
            out.as_ref(),
        ),
        Command::Sweep {
            params,
            delta_from,
            delta_to,
            delta_step,
            trials,
            algo,
            budget,
            out,
            gnuplot_hint,
        } => commands::sweep(
            &params,
            commands::SweepRange {
                from: &delta_from,
                to: &delta_to,
                step: &delta_step,
            },
            trials,
            &algo,
            budget,
            out.as_ref(),
            gnuplot_hint,
        ),
        Command::Ambiguity {
            gadget,
            input,
            d,
            cap,
            budget,
            search_max_edges,
            out,
        } => commands::ambiguity(
            gadget.as_deref(),
            input.as_ref(),
            d,
            cap,
            budget,
            search_max_edges,
            out.as_ref(),
        ),
        Command::Oracle {
            quantity,
            n,
            d,
            p,
            weighted,
            input,
            edges,
            out,
        } => commands::oracle(
            quantity,
            n,
            d,
            &p,
            weighted,
            input.as_ref(),
            edges.as_deref(),
            out.as_ref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Resource(m)) => {
            eprintln!("resource limit: {m}");
            ExitCode::from(3)
        }
    }
}
