//! `nexp`: N-expansion digits, dimension bounds, estimates, proof-condition
//! verifiers and CSV sweeps.

mod commands;
mod failure;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nexp_core::{parse_rational, ExactRational};

#[derive(Parser, Debug)]
#[command(
    name = "nexp",
    version,
    about = "N-expansion continued fractions and their dimension bounds"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Digits, convergents and the determinant check for a rational x.
    Digits(DigitsArgs),
    /// Closed-form dimension bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Numerical dimension of a bounded-digit set.
    Estimate(EstimateArgs),
    /// Exhaustive checks of the inequalities behind the bounds.
    Verify(VerifyArgs),
    /// Evaluate a family over a parameter grid and write CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct DigitsArgs {
    #[arg(long = "N")]
    pub n: u64,
    /// Rational in (0, 1) written as num/den.
    #[arg(long, value_parser = rational)]
    pub x: ExactRational,
    /// Maximum number of digits.
    #[arg(long, default_value_t = 64)]
    pub max: usize,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Bounds for digits in {N, ..., M}.
    Jarnik {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "M")]
        m: u64,
    },
    /// Bounds for digits at least alpha.
    Good {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        alpha: f64,
        /// Also solve (2s-1)(alpha-1)^(2s-1) = 1+N for s.
        #[arg(long)]
        solve_implicit: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Collocation,
    Words,
    Both,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub min_digit: Option<u64>,
    #[arg(long)]
    pub max_digit: u64,
    #[arg(long, value_enum, default_value_t = MethodChoice::Collocation)]
    pub method: MethodChoice,
    /// Bisection tolerance in s.
    #[arg(long, default_value_t = nexp_core::pressure::DEFAULT_S_TOL)]
    pub tol: f64,
    /// Collocation grid size.
    #[arg(long, default_value_t = nexp_core::pressure::DEFAULT_GRID)]
    pub grid: usize,
    /// Word length for the enumeration method.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Compare with the closed-form bracket for {N, ..., max-digit}.
    #[arg(long)]
    pub sandwich: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Growth,
    Mass,
    Cover,
    Sufficiency,
    Telescope,
    Good,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long = "M")]
    pub m: Option<u64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub max_digit: Option<u64>,
    #[arg(long)]
    pub alpha: Option<u64>,
    /// Children summed exactly before the tail bound takes over.
    #[arg(long, default_value_t = 100_000)]
    pub cutoff: u64,
    /// Prefix digits range over alpha..alpha+span-1.
    #[arg(long, default_value_t = nexp_core::verify::DEFAULT_GOOD_SPAN)]
    pub span: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Jarnik,
    Good,
    Estimate,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long = "N")]
    pub n: u64,
    /// Inclusive range a..b of M.
    #[arg(long = "M-range", value_parser = sweep::parse_range)]
    pub m_range: Option<(u64, u64)>,
    /// Comma-separated alpha values.
    #[arg(long, value_delimiter = ',')]
    pub alpha_list: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = MethodChoice::Collocation)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = nexp_core::pressure::DEFAULT_S_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: std::path::PathBuf,
}

fn rational(text: &str) -> Result<ExactRational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Digits(a) => commands::digits(&a, cli.format),
        Command::Bounds(b) => commands::bounds(&b, cli.format),
        Command::Estimate(a) => commands::estimate(&a, cli.format),
        Command::Verify(a) => verify::run(&a, cli.format),
        Command::Sweep(a) => sweep::run(&a, cli.format),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
