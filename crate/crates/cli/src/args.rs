use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gapflow::determinants::Method;

#[derive(Debug, Parser)]
#[command(name = "gapflow", version, about = "Discrete gap probabilities to arbitrary precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate D_{k+1/2} for k = 0..=kmax by one or more methods.
    Compute(RunArgs),
    /// Tabulate by two or more methods and report their discrepancies.
    Compare(RunArgs),
    /// Check determinants against combinatorial brute force.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Time each method at equal precision and k range.
    Bench(BenchArgs),
    /// Degeneration trend tables.
    #[command(subcommand)]
    Limits(LimitsCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Bessel,
    Hyp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub kernel: KernelKind,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Real number or complex `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Working precision in bits.
    #[arg(long, env = "GAPFLOW_PRECISION", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(64..=16384))]
    pub precision: u32,
    #[arg(long, default_value = "1e-20", allow_hyphen_values = true)]
    pub tol: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "method", value_parser = parse_method, required = true)]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub kmax: usize,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Defaults to toeplitz and recurrence.
    #[arg(long = "method", value_parser = parse_method)]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub kmax: usize,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
    pub repeats: u32,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Poissonized longest-increasing-subsequence law against the Bessel determinant.
    Lis {
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long, default_value_t = 9)]
        nmax: usize,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Partition sum under the poissonized Plancherel measure.
    Plancherel {
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long, default_value_t = 24)]
        sizemax: usize,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Partition sum under the z-measure (real parameter pair).
    Zmeasure {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        zp: String,
        #[arg(long)]
        xi: String,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long, default_value_t = 28)]
        sizemax: usize,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum LimitsCommand {
    /// Hypergeometric orbit against the Bessel orbit as z = z' = N grows.
    DpvToDpii {
        #[arg(long, default_value = "1")]
        eta: String,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scaled Bessel orbit against the continuum equation as eta grows.
    DpiiToPii {
        #[arg(long, value_delimiter = ',', required = true)]
        eta: Vec<String>,
        /// Grid `start:end:step`, inclusive of both ends.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: gapflow::GapError| e.to_string())
}
