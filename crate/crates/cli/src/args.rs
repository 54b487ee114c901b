use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdv_core::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "hdv", version, about = "Random hypervector experiments and text applications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Member and non-member bundle scores over repeated trials.
    MembershipSim(MembershipSimArgs),
    /// Empirical versus analytic precision/recall over a range of set sizes.
    RhoCurve(RhoCurveArgs),
    /// Word-context models.
    Context {
        #[command(subcommand)]
        command: ContextCommand,
    },
    /// Most similar sentences of a text file to a query.
    SentenceQuery(SentenceQueryArgs),
    /// Cross-validated nearest-neighbour spam filtering on a Ling-Spam layout.
    SpamEval(SpamEvalArgs),
}

#[derive(Debug, Args)]
pub struct MembershipSimArgs {
    #[arg(long, default_value_t = 10_000)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub k: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RhoCurveArgs {
    #[arg(long, default_value_t = 1000)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    /// Defaults to `--dim`.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = hdv_core::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LemmatizerArg {
    Identity,
    Suffix,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VocabModeArg {
    PerFold,
    Global,
}

/// Text preprocessing flags. `--stopwords` takes `builtin`, `none` or a path
/// to a word list.
#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub stopwords: Option<String>,
    #[arg(long, value_enum)]
    pub lemmatizer: Option<LemmatizerArg>,
}

#[derive(Debug, Subcommand)]
pub enum ContextCommand {
    /// Builds a context model from a text file.
    Build(ContextBuildArgs),
    /// Words with the most similar contexts.
    Similar(ContextSimilarArgs),
    /// Ranks words against a signed sum of contexts, e.g. `accent - german`.
    Arith(ContextArithArgs),
    /// Per-word context sizes, largest first.
    Stats(ContextStatsArgs),
}

#[derive(Debug, Args)]
pub struct ContextBuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Full window length 2L; must be even.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct ContextSimilarArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub word: String,
}

#[derive(Debug, Args)]
pub struct ContextArithArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Words joined by `+`/`-` (or `plus`/`minus`).
    #[arg(required = true, allow_hyphen_values = true)]
    pub terms: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ContextStatsArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Reports how many words have a total context larger than this.
    #[arg(long, default_value_t = 375)]
    pub threshold: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SentenceQueryArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value_t = 3)]
    pub top: usize,
    /// Rank by raw dot product instead of cosine.
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long, default_value_t = 1000)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpamEvalArgs {
    #[arg(long)]
    pub corpus_dir: PathBuf,
    #[arg(long, default_value_t = 3000)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "per-fold")]
    pub vocab_mode: VocabModeArg,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
