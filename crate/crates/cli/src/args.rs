use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ct-forge",
    version,
    about = "Exact constant terms, q-Dyson checks and proof certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the q-Dyson identity (or its q = 1 case) for one tuple or a grid.
    Verify(VerifyArgs),
    /// Build and validate vanishing certificates for CT Q_a(q^-b).
    Certify(CertifyArgs),
    /// Constant term of an expression.
    Ct(CtArgs),
    /// Check the witness lemma, exhaustively or on one instance.
    Tournament(TournamentArgs),
    /// Run the basic q-series identity suite.
    Identities(IdentitiesArgs),
    /// Time brute force against the proof replay; writes CSV.
    Bench(BenchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Certify(_) => "certify",
            Command::Ct(_) => "ct",
            Command::Tournament(_) => "tournament",
            Command::Identities(_) => "identities",
            Command::Bench(_) => "bench",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMethod {
    Brute,
    Replay,
    Both,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["a", "max_vars"])))]
pub struct VerifyArgs {
    /// Exponent of x0.
    #[arg(
        long,
        default_value_t = 0,
        allow_hyphen_values = true,
        conflicts_with = "max_vars"
    )]
    pub a0: i64,
    /// Exponents a_1..a_n, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub a: Option<Vec<i64>>,
    /// Grid mode: every tuple (a_0, ..., a_n) with at most this many entries.
    #[arg(long, requires = "max_a")]
    pub max_vars: Option<usize>,
    /// Grid mode: bound on each entry.
    #[arg(long, requires = "max_vars")]
    pub max_a: Option<u32>,
    #[arg(long, value_enum)]
    pub method: Option<VerifyMethod>,
    /// Check the classical identity at q = 1 instead.
    #[arg(long, conflicts_with = "method")]
    pub q1: bool,
    /// Print machine-readable results.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["a", "max_n"])))]
#[command(group(ArgGroup::new("which_b").args(["b", "all_b"])))]
pub struct CertifyArgs {
    /// a_1..a_n, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub a: Option<Vec<i64>>,
    /// Grid mode over all a with at most this many entries; implies --all-b.
    #[arg(long, requires = "max_a")]
    pub max_n: Option<usize>,
    #[arg(long, requires = "max_n")]
    pub max_a: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i64>,
    /// Every b in 1..=a_1+...+a_n.
    #[arg(long)]
    pub all_b: bool,
    /// Where to write certificate JSON: a file for a single certificate,
    /// a directory otherwise.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    /// Also evaluate the root constant term by series expansion and sample
    /// more internal nodes.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CtMethod {
    Brute,
    Pfrac,
    Both,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["var", "all_vars"])))]
pub struct CtArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    /// Variable to take the constant term in, e.g. x0.
    #[arg(long)]
    pub var: Option<String>,
    #[arg(long)]
    pub all_vars: bool,
    /// Weight bound for series expansions of terms with denominators.
    #[arg(long, default_value_t = 8)]
    pub truncation: i64,
    #[arg(long, value_enum, default_value_t = CtMethod::Brute)]
    pub method: CtMethod,
    /// Not supported: the order is always x0 < x1 < ...
    #[arg(long, hide = true)]
    pub var_order: Option<String>,
}

#[derive(Debug, Args)]
pub struct TournamentArgs {
    #[arg(long, default_value_t = 4, conflicts_with = "weights")]
    pub max_s: usize,
    #[arg(long, default_value_t = 3, conflicts_with = "weights")]
    pub max_a: u32,
    /// A single instance: the weights A_1..A_s.
    #[arg(long, value_delimiter = ',', num_args = 1, requires = "k")]
    pub weights: Option<Vec<u32>>,
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        allow_hyphen_values = true,
        requires = "weights"
    )]
    pub k: Option<Vec<i64>>,
    /// Allow k outside [1, ΣA] for a single instance.
    #[arg(long, requires = "weights")]
    pub relaxed: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    /// Series truncation degree.
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Largest n (number of variables besides x0).
    #[arg(long, default_value_t = 2)]
    pub max_n: usize,
    #[arg(long, default_value_t = 2)]
    pub max_a: u32,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
