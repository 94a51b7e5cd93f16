//! `eqlines`: exact bounds on equiangular line systems from the command line.

mod commands;
mod envelope;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqlines::{parse_rational, Exec, Rational};

#[derive(Debug, Parser)]
#[command(name = "eqlines", version, about = "Exact bounds on equiangular line systems")]
struct Cli {
    /// Run all fan-out on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form bounds on M_alpha(n).
    Bound(BoundArgs),
    /// Per-k nonexistence certificates for tight harmonic index 4 designs.
    Table(TableArgs),
    /// Solve the triangle LP by exact bisection.
    Lp(LpArgs),
    /// Inspect a configuration file: inner products, design test, tightness.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    All,
    Gerzon,
    Ls,
    OkudaYu,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    /// "p/q" or decimal; not needed for gerzon.
    #[arg(long, value_parser = rational)]
    pub alpha: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = rational)]
    pub alpha: Rational,
    /// Defaults to -alpha.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub beta: Option<Rational>,
    #[arg(long, default_value_t = 10)]
    pub lmax_p: usize,
    #[arg(long, default_value_t = 6)]
    pub lmax_s: usize,
    #[arg(long, default_value_t = 3)]
    pub imax_s: usize,
    /// Bisection stops once the bracket is at most this wide.
    #[arg(long, value_parser = rational, default_value = "1/1073741824")]
    pub tol: Rational,
    /// Only non-negativity and the degree-3 three-point row, at beta = -alpha;
    /// also replays the closed-form proof.
    #[arg(long)]
    pub minimal: bool,
    #[arg(long, default_value_t = 100_000)]
    pub max_pivots: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub file: std::path::PathBuf,
    /// Harmonic index for the design test.
    #[arg(long, default_value_t = 4)]
    pub t: usize,
    /// Overrides the file's tolerance for approximate input.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Table(a) => commands::table(a, exec),
        Command::Lp(a) => commands::lp(a, exec),
        Command::Check(a) => commands::check(a, exec),
    };
    match outcome {
        Ok(mut out) => {
            out.envelope.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            match out.text {
                Some(text) => print!("{text}"),
                None => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.envelope).expect("envelopes serialize")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
