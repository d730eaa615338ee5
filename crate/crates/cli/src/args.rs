use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sert", version, about = "Log-linear expertise retrieval pipelines")]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "SERT_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Floating-point precision for training and inference.
    #[arg(long, global = true, env = "SERT_PRECISION", value_enum, default_value_t = Precision::F32)]
    pub precision: Precision,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tokenize a JSON-lines corpus and write the vocabulary, candidates and encoded documents.
    Index(IndexArgs),
    /// Train a log-linear model on an index.
    Train(TrainArgs),
    /// Rank candidates for a query file and write a TREC run.
    Rank(RankArgs),
    /// Score a run against relevance judgments.
    Eval(EvalArgs),
    /// Compare two runs: side-by-side metrics, per-topic AP differences and significance.
    Compare(CompareArgs),
    /// Train and evaluate one model per window width.
    SweepWindow(SweepWindowArgs),
    /// Model 1 MAP as a function of the number of expansion terms.
    ExpandSweep(ExpandSweepArgs),
    /// Time inference against collection size and fit a line.
    Bench(BenchArgs),
    /// Generate a synthetic collection with queries and judgments.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct TokenizerArgs {
    /// Stopword list, one word per line (default: built-in English list).
    #[arg(long, conflicts_with = "no_stopwords")]
    pub stopwords: Option<PathBuf>,
    /// Keep stopwords.
    #[arg(long)]
    pub no_stopwords: bool,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// JSON lines with `doc_id`, `text` and `candidates`.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Keep at most this many non-reserved tokens.
    #[arg(long, default_value_t = sert::corpus::DEFAULT_VOCAB_SIZE)]
    pub vocab_size: usize,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrainingArgs {
    /// n-gram width.
    #[arg(long, default_value_t = 8)]
    pub window: usize,
    #[arg(long, default_value_t = 1024)]
    pub batch_size: usize,
    /// L2 weight decay λ.
    #[arg(long, default_value_t = 0.01)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Use plain gradient descent with this learning rate instead of adadelta.
    #[arg(long)]
    pub sgd: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub epochs: usize,
    /// Step windows by n instead of 1.
    #[arg(long)]
    pub no_overlap: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Embedding size.
    #[arg(long, default_value_t = 300)]
    pub dim: usize,
    /// Word vectors to start from (`word v1 v2 ...` per line).
    #[arg(long)]
    pub init_embeddings: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Directory written by `index`.
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Per-batch loss as JSON lines.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[command(flatten)]
    pub training: TrainingArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum System {
    LogLinear,
    Model1Jm,
    Model1Dirichlet,
    Model2Jm,
    Model2Dirichlet,
    Tfidf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// `<query_id>\t<text>` lines.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = System::LogLinear)]
    pub system: System,
    /// Model file (log-linear ranking and query expansion).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Index directory (baselines).
    #[arg(long)]
    pub index: Option<PathBuf>,
    /// Fuse with this second system by reciprocal-rank product.
    #[arg(long, value_enum)]
    pub ensemble_with: Option<System>,
    /// Expand Model 1 queries with this many embedding neighbours per term.
    #[arg(long, default_value_t = 0)]
    pub expand: usize,
    /// Fail on out-of-vocabulary query terms instead of dropping them.
    #[arg(long)]
    pub strict_oov: bool,
    /// Run tag (default: the system name).
    #[arg(long)]
    pub tag: Option<String>,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Gain {
    Exponential,
    Binary,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub run: PathBuf,
    #[arg(long)]
    pub qrels: PathBuf,
    /// JSON report path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Gain::Exponential)]
    pub gain: Gain,
    /// Also correlate per-query entropy with AP (run scores must be log-probabilities).
    #[arg(long)]
    pub entropy: bool,
    #[arg(long, default_value_t = 10_000)]
    pub permutations: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub run_a: PathBuf,
    #[arg(long)]
    pub run_b: PathBuf,
    #[arg(long)]
    pub qrels: PathBuf,
    /// Receives `compare.json` and `per_topic_ap.csv`.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = sert::eval::DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Also write the reciprocal-rank-product ensemble of the two runs.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Gain::Exponential)]
    pub gain: Gain,
}

#[derive(Debug, Args)]
pub struct SweepWindowArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub qrels: PathBuf,
    /// CSV with one row per window width.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8, 16, 32])]
    pub windows: Vec<usize>,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
}

#[derive(Debug, Args)]
pub struct ExpandSweepArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub qrels: PathBuf,
    /// CSV with one row per k.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2, 3, 5, 10])]
    pub k: Vec<usize>,
    /// Use Dirichlet instead of Jelinek-Mercer smoothing.
    #[arg(long)]
    pub dirichlet: bool,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Candidate counts for the log-linear model.
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 300)]
    pub dim: usize,
    #[arg(long, default_value_t = 5000)]
    pub vocab: usize,
    #[arg(long, default_value_t = 200)]
    pub queries: usize,
    #[arg(long, default_value_t = 4)]
    pub query_len: usize,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Also time Model 1 over candidate counts and Model 2 over document counts.
    #[arg(long)]
    pub baselines: bool,
    /// JSON report path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Plain,
    Synonyms,
    Mixed,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Receives `corpus.jsonl`, `queries.tsv` and `qrels.txt`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub candidates: usize,
    #[arg(long, default_value_t = 30)]
    pub docs: usize,
    /// Topical tokens per candidate.
    #[arg(long, default_value_t = 40)]
    pub vocab: usize,
    #[arg(long, default_value_t = 0.3)]
    pub noise: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Variant::Plain)]
    pub variant: Variant,
}
