//! Command-line surface. Every flag is documented here; `--help` output is
//! the reference for the doc-coverage test.

use clap::{Args, Parser, Subcommand};

/// Metaheuristics laboratory: seeded optimizer experiments, parameter
/// tuning, bias audits and nonparametric comparison reports.
#[derive(Debug, Parser)]
#[command(name = "mhlab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List registered algorithms with taxonomy tags and parameter spaces.
    List,
    /// Execute a seeded experiment plan and persist a result store.
    Run(RunArgs),
    /// Tune algorithm parameters by iterated racing.
    Tune(TuneArgs),
    /// Statistical comparison of a results CSV (Friedman, Wilcoxon, CD).
    Stats(StatsArgs),
    /// Paired shifted/non-shifted audit for origin bias.
    BiasAudit(BiasArgs),
    /// Render the report bundle (CSVs, stats text, SVG charts) for a store.
    Report(ReportArgs),
}

/// Output directory default: the MHLAB_OUT environment variable, else `./out`.
pub fn default_out() -> String {
    std::env::var("MHLAB_OUT").unwrap_or_else(|_| "out".into())
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Comma-separated algorithm ids (see `mhlab list`).
    #[arg(long, value_delimiter = ',')]
    pub algos: Vec<String>,

    /// Comma-separated function indices or ranges, e.g. `1-3,7` (default all).
    #[arg(long)]
    pub funcs: Option<String>,

    /// Comma-separated problem dimensions, e.g. `10,30`.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub dims: Vec<usize>,

    /// Independent seeded runs per (algorithm, function) cell.
    #[arg(long, default_value_t = 31)]
    pub runs: usize,

    /// Base seed; every run seed is derived from it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Evaluation budget per run as a multiple of the dimension.
    #[arg(long, default_value_t = 10_000)]
    pub budget_multiplier: u64,

    /// Use the shifted suite (optima away from the origin). Default.
    #[arg(long, conflicts_with = "nonshifted")]
    pub shifted: bool,

    /// Use the non-shifted suite (optima at the origin).
    #[arg(long)]
    pub nonshifted: bool,

    /// Worker threads for run execution.
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,

    /// Output directory (default: $MHLAB_OUT or ./out).
    #[arg(long, default_value_t = default_out())]
    pub out: String,

    /// Parameter preset: default, tuned-10, tuned-30, tuned-50, or a preset
    /// file written by `mhlab tune`.
    #[arg(long, default_value = "default")]
    pub preset: String,

    /// Problems per class as `unimodal,multimodal,hybrid,composition`.
    #[arg(long, default_value = "3,7,10,10")]
    pub counts: String,

    /// Record every n-th generation in trace files.
    #[arg(long, default_value_t = 1)]
    pub trace_stride: u64,

    /// Plan file (JSON); flags and --set entries override its fields.
    #[arg(long)]
    pub config: Option<String>,

    /// Repeatable plan override `key=value`; keys: seed, runs, dims,
    /// budget-multiplier, shifted, trace-stride, or `<algo>.<param>`.
    #[arg(long = "set")]
    pub set: Vec<String>,

    /// Print the descriptor count and exit without running anything.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// Comma-separated algorithm ids to tune.
    #[arg(long, value_delimiter = ',')]
    pub algos: Vec<String>,

    /// Scenario file (JSON, one scenario or an array); overrides the other
    /// tuning flags when present.
    #[arg(long)]
    pub scenario: Option<String>,

    /// Dimensions to tune for.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub dims: Vec<usize>,

    /// Total scoring runs per tuning session.
    #[arg(long, default_value_t = 2_000)]
    pub budget: u64,

    /// Evaluation budget of each scoring run, as a multiple of the dimension.
    #[arg(long, default_value_t = 1_000)]
    pub evals_multiplier: u64,

    /// Base seed for the session.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Racing elimination level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Output directory (default: $MHLAB_OUT or ./out).
    #[arg(long, default_value_t = default_out())]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Results CSV produced by `mhlab run` / `mhlab report`.
    #[arg(long)]
    pub input: String,

    /// Significance level for verdicts.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Aggregate cells by median instead of mean.
    #[arg(long)]
    pub median: bool,

    /// Also print the Iman-Davenport corrected Friedman statistic.
    #[arg(long)]
    pub iman_davenport: bool,

    /// Optional directory for the written report (stdout only when absent).
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct BiasArgs {
    /// Comma-separated algorithm ids to audit.
    #[arg(long, value_delimiter = ',')]
    pub algos: Vec<String>,

    /// Dimensions to audit (the reference protocol uses 10 and 30).
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub dims: Vec<usize>,

    /// Runs per (algorithm, function, condition) cell.
    #[arg(long, default_value_t = 31)]
    pub runs: usize,

    /// Base seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Evaluation budget per run as a multiple of the dimension.
    #[arg(long, default_value_t = 10_000)]
    pub budget_multiplier: u64,

    /// Problems per class as `unimodal,multimodal,hybrid,composition`.
    #[arg(long, default_value = "3,7,10,10")]
    pub counts: String,

    /// Verdict significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,

    /// Output directory (default: $MHLAB_OUT or ./out).
    #[arg(long, default_value_t = default_out())]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Store directory written by `mhlab run`.
    #[arg(long)]
    pub store: String,

    /// Output directory for the report bundle (default: the store itself).
    #[arg(long)]
    pub out: Option<String>,
}
