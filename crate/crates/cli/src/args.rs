//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Angles are in radians. Worker threads are taken from BURES_THREADS; the \
thread count never changes numerical output.

Exit codes: 0 success, 1 invariant or numerical failure, 2 usage error.";

#[derive(Debug, Parser)]
#[command(
    name = "bures",
    version,
    about = "Euler-angle density matrices and the Bures measure for n = 2, 3"
)]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density matrix, spectrum and Bures density at one point.
    Density(DensityArgs),
    /// Draw states from the normalized Bures measure.
    Sample(SampleArgs),
    /// Mean of a spectral functional under the normalized Bures measure.
    Integrate(IntegrateArgs),
    /// RAW normalization constant of the Bures density.
    Volume(VolumeArgs),
    /// Run the invariant suite.
    Check(CheckArgs),
}

fn parse_n(s: &str) -> Result<usize, String> {
    match s {
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(format!("n must be 2 or 3, got '{s}'")),
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Hilbert-space dimension.
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    /// Complete coordinate set as name=value pairs, e.g.
    /// theta=0.3,alpha=1.0,beta=0.5. Qutrit names: theta1, theta2, alpha,
    /// beta, gamma, theta_big, a, b.
    #[arg(long, value_delimiter = ',', required = true)]
    pub params: Vec<String>,
    #[arg(long, value_enum, default_value_t = Mode::Raw)]
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Raw,
    Normalized,
}

#[derive(Debug, Args)]
#[command(
    after_help = "CSV output has one row per state: the angles in canonical order, then \
the matrix flattened row-major with real and imaginary parts interleaved \
(rho_0_0_re, rho_0_0_im, rho_0_1_re, ...)."
)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long)]
    pub count: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    /// entropy, purity, or moment:k (Tr ρ^k; moment:0 is the constant 1).
    #[arg(long)]
    pub functional: String,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
    /// Quadrature nodes per axis.
    #[arg(long, default_value_t = 32)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = RuleArg::GaussLegendre)]
    pub rule: RuleArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    GaussLegendre,
    Simpson,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    /// Gauss-Legendre nodes per axis [default: 64 for n = 2, 10 for n = 3].
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
    pub suite: SuiteArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Perturb one Gell-Mann matrix before checking (test fixture).
    #[arg(long, hide = true)]
    pub corrupt_generator: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}
