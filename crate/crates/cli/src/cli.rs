use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use crate::parse::{self, NSpec};

#[derive(Debug, Parser)]
#[command(
    name = "cantorsum",
    version,
    about = "Minkowski self-sums of linear Cantor sets: goodness, uniqueness dimension, structure, constructions and search"
)]
pub struct Cli {
    /// Worker threads for searches [default: available parallelism]
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Print JSON instead of text or CSV
    #[arg(long, global = true)]
    pub json: bool,

    /// Write a run manifest (JSON) to this file
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Goodness, L/R/O typing, matrix, eigenvalue, dimension and structure of one set
    Analyze(SetArgs),
    /// Exhaustive or heuristic search for sets maximising dim U_A
    Search(SearchArgs),
    /// Tower chain from a base table row to a target n
    Tower(TowerArgs),
    /// O(sqrt n) good set with trivial uniqueness set
    Construct(ConstructArgs),
    /// Full interval / Cantor set / mixed classification with witnesses
    Structure(SetArgs),
    /// Finite-depth brute force: E_m components, level typing, growth
    Oracle(OracleArgs),
    /// Best known dim U_A per n with the log 2 / log 3 reference line
    Figure(FigureArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Search(_) => "search",
            Command::Tower(_) => "tower",
            Command::Construct(_) => "construct",
            Command::Structure(_) => "structure",
            Command::Oracle(_) => "oracle",
            Command::Figure(_) => "figure",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Search(a) => Some(a.seed),
            Command::Figure(a) => Some(a.seed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct Digits(pub Vec<i64>);

fn digits(text: &str) -> Result<Digits, String> {
    parse::digits(text).map(Digits)
}

#[derive(Debug, Args, Serialize)]
pub struct SetArgs {
    /// Base n
    #[arg(short = 'n')]
    pub n: u64,

    /// Digits, comma separated (e.g. 0,2,5,7)
    #[arg(short = 'A', long = "digits", value_parser = digits, allow_hyphen_values = true)]
    pub digits: Digits,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    /// Base n or inclusive range a..b
    #[arg(short = 'n', value_parser = parse::n_spec)]
    pub n: NSpec,

    /// Enumerate every set (n <= 30)
    #[arg(long, conflicts_with = "heuristic")]
    pub exhaustive: bool,

    /// Randomised hill climbing
    #[arg(long)]
    pub heuristic: bool,

    #[arg(long)]
    pub require_good: bool,

    /// Implies --require-good
    #[arg(long)]
    pub require_very_good: bool,

    /// Heuristic evaluation budget (accepts 1e6)
    #[arg(long, value_parser = parse::count, default_value = "100000")]
    pub budget: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Also write the CSV to this file
    #[arg(long, value_name = "PATH")]
    pub csv_out: Option<PathBuf>,

    /// Emit figure data (n,best_dim,reference) over the range instead
    #[arg(long)]
    pub figure: bool,

    /// With --figure: exhaustive search up to this n, heuristic above
    #[arg(long, default_value_t = 20)]
    pub exhaustive_max: u64,

    /// Stream every admissible set of an exhaustive search, not only the best
    #[arg(long, requires = "exhaustive")]
    pub all_records: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TowerArgs {
    /// Target base n
    #[arg(long)]
    pub target: u64,

    /// Only use this row of the base table
    #[arg(long, value_name = "N0")]
    pub base: Option<u64>,

    /// Recompute the typing of the final set from scratch
    #[arg(long)]
    pub verify_direct: bool,

    /// With --verify-direct: check every step, not only the last
    #[arg(long)]
    pub all_steps: bool,

    /// Base table CSV (n,digits,dim) replacing the bundled one
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,

    /// Write the chain (step,n,digits,lambda,dim) to this file
    #[arg(long, value_name = "PATH")]
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(short = 'n')]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("which").required(true).args(["em", "typing", "growth"])))]
pub struct OracleArgs {
    #[arg(short = 'n')]
    pub n: u64,

    #[arg(short = 'A', long = "digits", value_parser = digits, allow_hyphen_values = true)]
    pub digits: Digits,

    /// Treat the digits as an arbitrary integer set (implied for --em when not canonical)
    #[arg(long)]
    pub general: bool,

    /// Components of the level-m approximation E_m (CSV)
    #[arg(long)]
    pub em: bool,

    /// Unique-coverage counts (L_m, R_m)
    #[arg(long)]
    pub typing: bool,

    /// (L_m, R_m) for m = 1..depth against the matrix-power evolution
    #[arg(long)]
    pub growth: bool,

    /// Depth m [default: 8 for --em, 6 otherwise]
    #[arg(long)]
    pub depth: Option<u32>,

    /// Work budget per level (accepts 1e7)
    #[arg(long, env = "CANTORSUM_BUDGET", value_parser = parse::count, default_value = "10000000")]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    /// Inclusive range a..b
    #[arg(short = 'n', value_parser = parse::n_spec)]
    pub n: NSpec,

    /// Heuristic evaluation budget per n (accepts 1e5)
    #[arg(long, value_parser = parse::count, default_value = "20000")]
    pub budget: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Exhaustive search up to this n, heuristic above
    #[arg(long, default_value_t = 20)]
    pub exhaustive_max: u64,

    #[arg(long, value_name = "PATH")]
    pub csv_out: Option<PathBuf>,
}
