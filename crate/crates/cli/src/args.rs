use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use refined_core::genus_series::Source;
use refined_core::invariants::Method;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Parser)]
#[command(name = "refined", version, about = "Exact refined invariants of abelian surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for cached results.
    #[arg(long, global = true, env = "REFINED_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refined invariant BG_{g,B}(q) of a primitive or general class.
    Bg(BgArgs),
    /// Codegree coefficients Q_{g,i}(n) of AR*_g(n, x).
    Ar(ArArgs),
    /// The series G_m(x) = sum_a a^m (bar P_a(x) - 1).
    Gm(GmArgs),
    /// Generating series over the genus of a fixed codegree coefficient.
    SeriesInGenus(SeriesArgs),
    /// Run the identity checks and print a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["n", "det"])))]
#[command(allow_negative_numbers = true)]
pub struct BgArgs {
    #[arg(long)]
    pub genus: u32,
    /// Determinant of the primitive class diag(1, n).
    #[arg(long, conflicts_with_all = ["det", "divisibility"])]
    pub n: Option<i64>,
    /// Determinant of the class.
    #[arg(long, requires = "divisibility")]
    pub det: Option<i64>,
    /// Divisibility of the class; its square must divide the determinant.
    #[arg(long, requires = "det")]
    pub divisibility: Option<i64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Convolution)]
    pub method: MethodArg,
    /// Print BG* = det / (g (g - 1)) BG instead.
    #[arg(long)]
    pub star: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Convolution,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Convolution => Method::Convolution,
        }
    }
}

#[derive(Debug, Args)]
pub struct ArArgs {
    #[arg(long)]
    pub genus: u32,
    /// Highest codegree (power of x) to compute.
    #[arg(long, default_value_t = 3)]
    pub xmax: usize,
    /// Also interpolate from finite n and report agreement.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct GmArgs {
    #[arg(long)]
    pub m: u32,
    /// Truncation order in x.
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = GmMethod::Closed)]
    pub method: GmMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GmMethod {
    Direct,
    Closed,
    Both,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SeriesArgs {
    #[arg(long)]
    pub codegree: u32,
    #[arg(long)]
    pub n: i64,
    /// Truncation order in u.
    #[arg(long, default_value_t = 12)]
    pub umax: usize,
    #[arg(long, value_enum, default_value_t = SourceArg::Closed)]
    pub source: SourceArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Closed,
    General,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Closed => Source::Closed,
            SourceArg::General => Source::General,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 6)]
    pub max_genus: u32,
    /// Highest codegree checked for the asymptotic identities.
    #[arg(long, default_value_t = 6)]
    pub max_trunc: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    /// Identities with printed closed forms.
    Paper,
    /// Cross-checks of the fast routes against brute force.
    Oracle,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Paper => "paper",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}
