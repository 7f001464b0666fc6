use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "prodset", version, about = "Count sequence terms inside product sets B·B")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    Above,
    Mid,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Largest Fibonacci count in B·B over all B ⊆ {1..N} with |B| = K.
    FibExtremal {
        #[arg(long)]
        universe: u64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count sequence terms in B·B against 2|B| + 30.
    LucasBound {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value = "lucasV")]
        seq: String,
        /// Term table size for sequences that are not monotone.
        #[arg(long)]
        max_index: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representation graph of the sequence terms in B·B.
    Graph {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value = "fib")]
        seq: String,
        #[arg(long, value_enum, default_value = "one")]
        mode: ModeArg,
        /// Keep only terms with at least this index.
        #[arg(long, default_value_t = 1)]
        min_index: u64,
        #[arg(long)]
        max_index: Option<u64>,
        /// Write the edge list as CSV.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor the window f(r+1), …, f(r+R) and emit per-term CSV.
    Window {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        r: u64,
        #[arg(long = "R")]
        window: u64,
        #[arg(long, value_enum, default_value = "above")]
        filter: FilterArg,
        /// `auto` or `a:M`; divides terms by the content.
        #[arg(long)]
        residue: Option<String>,
        /// Add the positivity shift of f to r.
        #[arg(long)]
        auto_shift: bool,
        #[arg(long, default_value = "2")]
        gamma: String,
        #[arg(long, default_value_t = prodset_core::polyseq::DEFAULT_TERM_BITS)]
        max_bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write counts and log of the smooth part as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Lower bound on |B| from a window of P inside B·B.
    Witness {
        /// Irreducible factors, `;`-separated, each `c0,c1,...[^m]`.
        #[arg(long, allow_hyphen_values = true)]
        poly_factors: String,
        #[arg(long)]
        r: u64,
        #[arg(long = "R")]
        window: u64,
        #[arg(long, default_value = "2")]
        gamma: String,
        #[arg(long, default_value_t = prodset_core::polyseq::DEFAULT_TERM_BITS)]
        max_bits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fresh-neighbour cover sequence of a bipartite graph file.
    Cover {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every acceptance check.
    Selftest,
}
