use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lifetime_info::{CovMode, IndexConvention, MeasureId};

#[derive(Debug, Parser)]
#[command(
    name = "lifetime-info",
    version,
    about = "Residual/past entropies, mean residual/past lifetimes and inaccuracy measures of discrete lifetime distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value of a measure; without --j, every time index.
    Exact(ExactArgs),
    /// Plug-in estimate from a sample.
    Estimate(EstimateArgs),
    /// Almost-sure bound constant A and asymptotic variance of an estimator.
    Asymptotics(AsymptoticsArgs),
    /// Monte Carlo replication study of an estimator.
    Mc(McArgs),
    /// Estimates along one growing sample.
    Trace(TraceArgs),
    /// Reproduce the published example tables and diff them against the
    /// printed values.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Distribution file: {"support": [...], "probs": [...]}.
    #[arg(long, conflicts_with = "pair")]
    pub dist: Option<PathBuf>,
    /// Pair file: {"p": <distribution>, "q": <distribution>}.
    #[arg(long)]
    pub pair: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Measure name, e.g. residual-entropy or cum-past-inaccuracy.
    #[arg(long, value_parser = parse_measure)]
    pub measure: MeasureId,
    /// 1-based time index.
    #[arg(long)]
    pub j: Option<usize>,
    /// Summation range of residual-type sums.
    #[arg(long, value_enum, default_value_t = Convention::Paper)]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// True distribution; adds the estimation error and sup-deviations.
    #[arg(long, conflicts_with_all = ["pair", "support"])]
    pub dist: Option<PathBuf>,
    /// True p and the known experimenter distribution q.
    #[arg(long, conflicts_with = "support")]
    pub pair: Option<PathBuf>,
    /// Support only: {"support": [...]} or a JSON array.
    #[arg(long)]
    pub support: Option<PathBuf>,
    /// Observations, one per line, or {"support": [...], "counts": [...]}.
    #[arg(long)]
    pub sample: PathBuf,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, value_enum, default_value_t = CovModeArg::Delta)]
    pub cov_mode: CovModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, value_enum, default_value_t = CovModeArg::Delta)]
    pub cov_mode: CovModeArg,
    /// Sample size per replication.
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    /// Number of replications.
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV file for the per-replication draws.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file for the summary (also printed to standard output).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Format of the summary on standard output.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Exit with status 5 unless the KS test passes at the 95% level and the
    /// empirical variance is within 10% of the asymptotic variance.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Largest sample size of the grid.
    #[arg(long, default_value_t = 30_000)]
    pub n: u64,
    /// Grid spacing; the grid is step, 2 step, ..., n.
    #[arg(long, default_value_t = 100)]
    pub step: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// Residual sums over k = j..r.
    Paper,
    /// Residual sums over k = j+1..r.
    Proper,
}

impl From<Convention> for IndexConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Paper => IndexConvention::PaperInclusive,
            Convention::Proper => IndexConvention::ConditionalProper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CovModeArg {
    PaperIndependent,
    Delta,
}

impl From<CovModeArg> for CovMode {
    fn from(c: CovModeArg) -> Self {
        match c {
            CovModeArg::PaperIndependent => CovMode::PaperIndependent,
            CovModeArg::Delta => CovMode::DeltaMethod,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

fn parse_measure(s: &str) -> Result<MeasureId, String> {
    s.parse::<MeasureId>()
}
