use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "paramenv",
    version,
    about = "Exact parametric shortest-path envelopes and lower-bound families"
)]
pub struct Cli {
    /// Worker threads for parallel trials and verifications (0 = all cores).
    #[arg(long, global = true, env = "PARAMENV_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph, gadget or word sequence.
    #[command(subcommand)]
    Generate(Generate),
    /// Lower envelope of a graph's s-t cost.
    Envelope(EnvelopeArgs),
    /// Check an artifact; exit status 1 if the check fails.
    #[command(subcommand)]
    Verify(Verify),
    /// Path polytope of a three-parameter graph against sampled directions.
    Hull3(Hull3Args),
    #[command(subcommand)]
    Experiment(Experiment),
    #[command(subcommand)]
    Reduce(Reduce),
    /// Render an envelope document as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct Out {
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportOpt {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// The recursive lower-bound graph G(B, D, m) with its declared paths.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long = "B")]
        inputs: usize,
        #[arg(long = "D", default_value = "0")]
        d: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Planarized linking gadget with J = 0 unless `--main-lemma` is given.
    Link {
        #[arg(long = "B")]
        inputs: usize,
        #[arg(long)]
        n: usize,
        /// Defaults to the smallest admissible value.
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long = "L", default_value = "0")]
        l: String,
        /// Use the weights of the recursive construction for this D.
        #[arg(long = "main-lemma", value_name = "D")]
        main_lemma: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// The alternation-free word sequence X (or X-hat with `--hat`).
    Words {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        hat: bool,
        #[command(flatten)]
        out: Out,
    },
    /// The p x q directed grid; zero weights unless `--seed` is given.
    GridSkeleton {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        bits: u32,
        #[command(flatten)]
        out: Out,
    },
    /// The non-planar word graph.
    Gnpl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Out,
    },
    /// The planar word graph.
    Gpl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Dp,
    Bruteforce,
    /// Run both and fail unless they agree exactly.
    Both,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// `lo:hi`, e.g. `0:16`; the whole line if omitted.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, value_enum, default_value_t = Oracle::Dp)]
    pub oracle: Oracle,
    /// Path limit for the brute-force oracle.
    #[arg(long, default_value_t = 100_000)]
    pub limit: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// The six induction properties of a generated instance.
    Phi {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        report: ReportOpt,
    },
    /// Faithfulness of a planarized gadget by exhaustive enumeration.
    Link {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
        #[command(flatten)]
        report: ReportOpt,
    },
    /// Exhaustive alternation search over a word sequence.
    Words {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also map the words to paths and check those.
        #[arg(long)]
        paths: bool,
        #[command(flatten)]
        report: ReportOpt,
    },
    /// Alternation check of a path list (or an envelope's witnesses).
    Paths {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        report: ReportOpt,
    },
    /// Davenport-Schinzel check of a JSON integer array.
    Ds {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        report: ReportOpt,
    },
}

#[derive(Debug, Args)]
pub struct Hull3Args {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub limit: usize,
    #[command(flatten)]
    pub report: ReportOpt,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Piece counts of random weights on the p x q grid.
    Grid {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        bits: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        report: ReportOpt,
    },
}

#[derive(Debug, Subcommand)]
pub enum Reduce {
    /// Solve the fixed-λ shortest path through a perfect matching.
    Matching {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        report: ReportOpt,
    },
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 640)]
    pub width: u32,
    #[arg(long, default_value_t = 400)]
    pub height: u32,
    /// `lo:hi`; required when the envelope has no bounded domain.
    #[arg(long)]
    pub range: Option<String>,
}
