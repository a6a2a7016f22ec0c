use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Joint clustering of scientific claims and papers, cluster evaluation and
/// check-worthiness ranking.
#[derive(Debug, Parser)]
#[command(name = "sciclaim", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// Number of clusters.
    #[arg(long, global = true, default_value_t = 10)]
    clusters: usize,

    /// Anti-uniformity regularizer weight.
    #[arg(long, global = true, default_value_t = 0.3)]
    beta: f64,

    /// Reconstruction weight for `--model ao`.
    #[arg(long, global = true, default_value_t = 0.5)]
    gamma: f64,

    /// Popularity share of the edge weight.
    #[arg(long, global = true, default_value_t = 0.4)]
    theta: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Length of top-k lists (recall, context).
    #[arg(long, global = true, default_value_t = 3)]
    k: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the grammar and context heuristics over annotated sentences.
    Extract(ExtractArgs),
    /// Cluster claims and papers.
    Cluster(ClusterArgs),
    /// Semantic coherence (ASW) and interconnection coherence (R@k) of clusterings.
    Evaluate(EvaluateArgs),
    /// Rank claims by knowledge-graph centrality within each cluster.
    Rank(RankArgs),
    /// Fact-checking context for the top-ranked claims.
    Context(ContextArgs),
    /// Write a synthetic corpus with planted clusters.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// JSON-lines annotated sentences.
    #[arg(long)]
    sentences: PathBuf,
    /// Reporting verbs, one lemma per line.
    #[arg(long)]
    verbs: PathBuf,
    /// Science nouns, one lemma per line.
    #[arg(long)]
    nouns: PathBuf,
    /// JSON-lines social postings for the context heuristic.
    #[arg(long)]
    postings: Option<PathBuf>,
    #[arg(long, default_value_t = sciclaim_core::extract::DEFAULT_CONTEXT_THRESHOLD)]
    threshold: f64,
    /// Output JSON-lines file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitAlgorithm {
    Kmeans,
    Gmm,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// Corpus directory.
    #[arg(long)]
    corpus: PathBuf,
    /// kmeans, gmm, gba-cp|c|p, gbt-cp|c|p, ao-content|balanced|graph, or ao (uses --gamma).
    #[arg(long)]
    model: String,
    /// Output directory for claims.csv, papers.csv and meta.json.
    #[arg(long)]
    out: PathBuf,
    /// Content clustering used as fixed side or starting point.
    #[arg(long, value_enum, default_value = "kmeans")]
    init: InitAlgorithm,
    /// Reduce embeddings to this many principal components before content clustering.
    #[arg(long)]
    pca: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    step_size: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Output directories of `cluster`; one TSV row each.
    #[arg(long, required = true, num_args = 1..)]
    assignments: Vec<PathBuf>,
    /// Also write the TSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Causality,
    Aspect,
}

#[derive(Debug, Args)]
struct RankInputs {
    #[arg(long)]
    corpus: PathBuf,
    /// Vocabulary TSV: term, class.
    #[arg(long)]
    vocab: PathBuf,
    /// Outlet reputation TSV: outlet, score in [0, 1].
    #[arg(long)]
    outlets: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "causality")]
    topology: TopologyArg,
    /// Focal term of the aspect topology.
    #[arg(long)]
    focal: Option<String>,
    /// Output directory of `cluster`; without it the whole corpus is one group.
    #[arg(long)]
    assignments: Option<PathBuf>,
    /// Restrict to one cluster index.
    #[arg(long)]
    cluster: Option<usize>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[command(flatten)]
    inputs: RankInputs,
    /// JSON report path; a text summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Edges listed per group in the text summary.
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Debug, Args)]
struct ContextArgs {
    #[command(flatten)]
    inputs: RankInputs,
    /// JSON-lines verified claims.
    #[arg(long)]
    verified: Option<PathBuf>,
    /// Top-ranked claims per group that receive a context.
    #[arg(long, default_value_t = 3)]
    top: usize,
    #[arg(long, default_value_t = sciclaim_core::contextualize::DEFAULT_LINK_THRESHOLD)]
    threshold: f64,
    /// Output directory for context.json and context.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    claims: usize,
    #[arg(long, default_value_t = 100)]
    papers: usize,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    #[arg(long, default_value_t = 0.05)]
    link_noise: f64,
}

/// A problem with the command line rather than with the data.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("run `sciclaim --help` for usage");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
