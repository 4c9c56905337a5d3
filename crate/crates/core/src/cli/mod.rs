//! Command-line front end.
//!
//! Every command produces a human-readable summary and a machine-readable
//! document (state file, JSON report or CSV). `--json` prints the machine
//! document; `--out` writes it to a file.

pub mod bench;
mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Result;

pub use commands::{CommandOutput, Machine};

#[derive(Debug, Parser)]
#[command(name = "symsep", version, about = "Symmetric-operator entanglement witnesses and concurrence")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Tolerance: relative violation tolerance for detect/bench, diagonal
    /// tolerance for hollow.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the machine-readable output to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the machine-readable output instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock time to reports (makes them non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a state file.
    Gen(GenArgs),
    /// Concurrence of a pure state by one or all formulas.
    Concurrence(ConcurrenceArgs),
    /// Entanglement detection with random symmetric witnesses.
    Detect(DetectArgs),
    /// PPT and two-qubit concurrence reference checks.
    Oracle(OracleArgs),
    /// Hollowize the S matrix of a state and witness.
    Hollow(HollowArgs),
    /// Trials-to-detection benchmark over a parameter grid (CSV).
    Bench(BenchArgs),
    /// Check that a state file is well formed.
    Validate(StateArg),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Ghz,
    W,
    Bell,
    Werner,
    Isotropic,
    RandomPure,
    RandomMixed,
    RandomSeparable,
    Product,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: Family,
    /// Number of parties (ghz, w).
    #[arg(long)]
    pub n: Option<usize>,
    /// Local dimension (ghz, isotropic).
    #[arg(long)]
    pub d: Option<usize>,
    /// Mixing parameter (werner, isotropic).
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated subsystem dimensions (random families, product).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Rank of a random mixed state (default: full).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Number of product terms in a random separable mixture.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
}

#[derive(Debug, Args)]
pub struct StateArg {
    pub state: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum MethodArg {
    All,
    Purity,
    Cut,
    Operator,
}

#[derive(Debug, Args)]
pub struct ConcurrenceArgs {
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    pub state: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Evaluate every trial instead of stopping at the first violation.
    #[arg(long)]
    pub full_stats: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub state: PathBuf,
    /// Subsystem to transpose (1-based).
    #[arg(long, default_value_t = 2)]
    pub subsystem: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum SizeArg {
    Auto,
    Square,
}

#[derive(Debug, Args)]
pub struct HollowArgs {
    pub state: PathBuf,
    /// `basis:i,i',j,j'`, `cut:k:r1,..,rN:c1,..,cN` (1-based) or `random`.
    #[arg(long, default_value = "basis:1,2,1,2")]
    pub witness: String,
    /// Antisymmetrized subsystem for a random multipartite witness (1-based).
    #[arg(long, default_value_t = 1)]
    pub cut: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = SizeArg::Auto)]
    pub size: SizeArg,
    /// Explicit decomposition size, overriding `--size`.
    #[arg(long)]
    pub padded: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum BenchFamilyArg {
    Werner,
    Isotropic,
    Schmidt,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: BenchFamilyArg,
    /// `a,b,c` or `start:stop:step`.
    #[arg(long, default_value = "0.4:1.0:0.1")]
    pub param_grid: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Local dimension (isotropic, schmidt).
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Weight of the pure component (schmidt).
    #[arg(long, default_value_t = 0.9)]
    pub visibility: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Result<CommandOutput>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| crate::Error::Argument(e.to_string()))?;
    commands::dispatch(&cli)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(&cli).and_then(|out| out.emit(&cli.global)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run_from_env() -> i32 {
    run(std::env::args_os())
}
