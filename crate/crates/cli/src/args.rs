use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ddbar", version, about = "Cohomology, ddbar-type criteria and balanced metrics on nilmanifolds and solvmanifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check d^2 = 0, integrability, Abelian and unimodular flags.
    Validate(Common),
    /// Dolbeault, conjugate Dolbeault, Bott-Chern and Aeppli numbers, and Betti numbers.
    Hodge(Common),
    /// ddbar-degrees, sGG, strong/weak (n-1,n)-lemmas and the ddbar-Lemma.
    Criteria(Common),
    /// Evaluate criteria along a parameter sweep and summarize jumps.
    Sweep(SweepArgs),
    /// Positivity, balanced, Gauduchon, strongly Gauduchon and LCB checks.
    CheckMetric(MetricArgs),
    /// Search for a closed positive (n-1,n-1) form.
    FindBalanced(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `.cplx` structure equations or `.dcplx` raw double complex.
    pub file: PathBuf,
    /// Parameter assignment, e.g. `D=1/8,t=1/3-i/5`.
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Also write newline-delimited JSON documents to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Assertions such as `strong=false,weak=true,bc22=6`; exit 1 if any fails.
    #[arg(long)]
    pub expect: Option<String>,
    /// Record wall-clock time in reports (off by default so reports are byte-stable).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `t=0,1/4,i/3` or `t=start:step:count` with Gaussian rational start and step.
    #[arg(long)]
    pub sweep: String,
    /// Also check this metric at every sample.
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug, Clone)]
pub struct MetricArgs {
    #[command(flatten)]
    pub common: Common,
    /// Real (1,1) form, e.g. `i/2*e(1,-1) + i/2*e(2,-2)`.
    #[arg(long)]
    pub metric: String,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of candidates tried before answering "unknown".
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
}
