//! `psim`: compare clusterings and check the properties of similarity indices.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "psim", version, about = "Cluster similarity indices and their properties")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Comma-separated index ids (see `psim indices list`).
    #[arg(long, global = true)]
    pub indices: Option<String>,
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples (clusterings per point, or permutation samples).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Largest partition size for exhaustive searches.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a candidate clustering against a reference.
    Score { reference: PathBuf, candidate: PathBuf },
    /// Score several candidates against one reference.
    Matrix {
        reference: PathBuf,
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
    },
    /// Pairwise consistency of indices over (reference, B1, B2) triplets.
    Triplets {
        /// One triplet per line: three partition files, reference first.
        manifest: PathBuf,
        /// Emit per-triplet verdicts instead of the aggregated matrix.
        #[arg(long)]
        per_triplet: bool,
    },
    /// Search small triplets on which every orderable index pair disagrees.
    FindCover {
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Sampling rounds before giving up.
        #[arg(long, default_value_t = 25)]
        rounds: usize,
        /// Triplets drawn per round.
        #[arg(long, default_value_t = 20_000)]
        batch: usize,
    },
    /// Property matrix with witnesses for violated cells.
    Properties {
        /// Largest `n` for AMI/SMI (defaults to `--n-max`).
        #[arg(long)]
        n_max_sampled: Option<usize>,
        /// Print which indices satisfy which properties instead of the matrix.
        #[arg(long)]
        guide: bool,
    },
    /// Constant-baseline ANOVA and selection-bias tests, combined over n.
    BaselineTests {
        #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 150, 200])]
        n_values: Vec<usize>,
        /// Random clusterings per group.
        #[arg(long, default_value_t = 100)]
        r: usize,
    },
    /// Baseline curves of random clusterings against a reference.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Index registry.
    #[command(subcommand)]
    Indices(IndicesCmd),
}

#[derive(Debug, Subcommand)]
enum Experiment {
    /// Balanced random clusterings with k clusters.
    KScan {
        /// Reference partition file; the bundled n=924 fixture by default.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        k_values: Option<Vec<usize>>,
    },
    /// 31 clusters of size s plus one large cluster.
    SScan {
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        s_values: Option<Vec<usize>>,
    },
}

#[derive(Debug, Subcommand)]
enum IndicesCmd {
    List,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(String),
    /// The reader closed standard output, as in `psim ... | head`.
    #[error("output closed")]
    Closed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Closed => 0,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return CliError::Closed;
            }
        }
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    match cli.command {
        Command::Score {
            reference,
            candidate,
        } => commands::score(c, &reference, &candidate),
        Command::Matrix {
            reference,
            candidates,
        } => commands::matrix(c, &reference, &candidates),
        Command::Triplets {
            manifest,
            per_triplet,
        } => commands::triplets(c, &manifest, per_triplet),
        Command::FindCover {
            max_size,
            rounds,
            batch,
        } => commands::find_cover(c, max_size, rounds, batch),
        Command::Properties {
            n_max_sampled,
            guide,
        } => commands::properties(c, n_max_sampled, guide),
        Command::BaselineTests { n_values, r } => commands::baseline_tests(c, &n_values, r),
        Command::Experiment(Experiment::KScan {
            reference,
            k_values,
        }) => commands::k_scan(c, reference.as_deref(), k_values),
        Command::Experiment(Experiment::SScan {
            reference,
            s_values,
        }) => commands::s_scan(c, reference.as_deref(), s_values),
        Command::Indices(IndicesCmd::List) => commands::indices_list(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psim: {e}");
            ExitCode::from(e.code())
        }
    }
}
