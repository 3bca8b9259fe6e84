use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use tailrank_cli::commands::{
    cmd_estimate, cmd_experiment, cmd_score, cmd_simulate, EstimateArgs, EstimateMethod,
    ExperimentArgs, KArgs, OutputFormat, ScoreArgs, SimulateArgs,
};
use tailrank_cli::config::{parse_candidates, parse_dgp, parse_rule, parse_scaling};
use tailrank_cli::ingest::dataset_spec;

/// Rank heavy-tailed models and estimate tail indices with proper scoring
/// rules on normalized upper order statistics.
#[derive(Parser)]
#[command(name = "tailrank", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DatasetArgs {
    /// Input CSV file (comma separated, header row).
    #[arg(long)]
    input: PathBuf,
    /// Column holding the observations.
    #[arg(long)]
    value_column: String,
    /// Keep only rows where COL equals VAL (`--filter COL=VAL`).
    #[arg(long)]
    filter: Option<String>,
    /// Skip rows with a missing value instead of aborting.
    #[arg(long)]
    drop_missing: bool,
}

#[derive(Args)]
struct KFlags {
    /// Smallest k (default: 10 for integer grids, 50 for --k-points grids).
    #[arg(long)]
    k_min: Option<usize>,
    /// Largest k (default: n/4).
    #[arg(long)]
    k_max: Option<usize>,
    /// Evenly spaced grid with this many points instead of all integers.
    #[arg(long, conflicts_with = "k_all_integers")]
    k_points: Option<usize>,
    /// Every integer k in range (the default when no grid flags are given).
    #[arg(long)]
    k_all_integers: bool,
}

impl From<&KFlags> for KArgs {
    fn from(f: &KFlags) -> Self {
        KArgs {
            k_min: f.k_min,
            k_max: f.k_max,
            k_points: f.k_points,
            k_all_integers: f.k_all_integers,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Score Pareto tail candidates over a k-grid and rank them over the
    /// stable lower range.
    Score {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Comma-separated candidate tail indices, e.g. 0.3,0.5,0.8,1,1.3.
        #[arg(long)]
        candidates: String,
        /// Scoring rule: `logs` or `es:<beta>`.
        #[arg(long, default_value = "logs")]
        rule: String,
        #[command(flatten)]
        k: KFlags,
        /// Fraction of the k-grid (smallest values) used for the ranking.
        #[arg(long, default_value_t = 0.25)]
        stability_fraction: f64,
        /// Candidate whose curve carries the CI columns (default: 1.0 when
        /// present among the candidates).
        #[arg(long)]
        ci_candidate: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Estimate the tail index by Hill and/or score optimization across k.
    Estimate {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long, value_enum, default_value_t = EstimateMethod::Both)]
        method: EstimateMethod,
        /// Scoring rule for the score-optimization estimator.
        #[arg(long, default_value = "logs")]
        rule: String,
        /// Lower bound of the gamma search grid (with --grid-hi); default is
        /// the pilot-Hill grid [0.8 g, 2 g].
        #[arg(long)]
        grid_lo: Option<f64>,
        #[arg(long)]
        grid_hi: Option<f64>,
        #[arg(long, default_value_t = 150)]
        grid_points: usize,
        #[command(flatten)]
        k: KFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run a declarative Monte Carlo experiment from a TOML config.
    Experiment {
        /// Config file; keys mirror the experiment spec (see README).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Emit a synthetic sample to a file.
    Simulate {
        /// Data-generating process: pareto:<g> | frechet:<g> | burr:<g>[:<t>].
        #[arg(long)]
        dgp: String,
        #[arg(long)]
        n: usize,
        /// Per-index scale factors: none | linear | sinusoidal.
        #[arg(long, default_value = "none")]
        scaling: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Score {
            dataset,
            candidates,
            rule,
            k,
            stability_fraction,
            ci_candidate,
            seed,
            out_dir,
            format,
        } => cmd_score(&ScoreArgs {
            dataset: dataset_spec(
                &dataset.input,
                &dataset.value_column,
                dataset.filter.as_deref(),
                dataset.drop_missing,
            )?,
            candidates: parse_candidates(&candidates)?,
            rule: parse_rule(&rule)?,
            k: (&k).into(),
            stability_fraction,
            ci_candidate,
            seed,
            out_dir,
            format,
        }),
        Command::Estimate {
            dataset,
            method,
            rule,
            grid_lo,
            grid_hi,
            grid_points,
            k,
            seed,
            out_dir,
            format,
        } => cmd_estimate(&EstimateArgs {
            dataset: dataset_spec(
                &dataset.input,
                &dataset.value_column,
                dataset.filter.as_deref(),
                dataset.drop_missing,
            )?,
            method,
            rule: parse_rule(&rule)?,
            grid_lo,
            grid_hi,
            grid_points,
            k: (&k).into(),
            seed,
            out_dir,
            format,
        }),
        Command::Experiment { config, out_dir } => cmd_experiment(&ExperimentArgs {
            config_path: config,
            out_dir,
        }),
        Command::Simulate {
            dgp,
            n,
            scaling,
            seed,
            out_dir,
            format,
        } => cmd_simulate(&SimulateArgs {
            dgp: parse_dgp(&dgp)?,
            n,
            scaling: parse_scaling(&scaling)?,
            seed,
            out_dir,
            format,
        }),
    }
}
