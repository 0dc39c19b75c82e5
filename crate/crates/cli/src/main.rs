mod commands;
mod complex;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use complex::parse_c64;

/// Elliptic gamma, theta and hyperbolic gamma functions, totally elliptic
/// terms and elliptic hypergeometric integrals.
#[derive(Debug, Parser)]
#[command(name = "elliptio", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the wall time out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single function.
    Eval(EvalArgs),
    /// Check a term for total ellipticity.
    CheckTerm(CheckTermArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Compute an integral over the torus.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Function {
    #[value(name = "theta")]
    Theta,
    #[value(name = "ell_gamma")]
    EllGamma,
    #[value(name = "G_product")]
    GProduct,
    #[value(name = "G_B33")]
    GB33,
    #[value(name = "hyp_gamma_product")]
    HypGammaProduct,
    #[value(name = "hyp_gamma_integral")]
    HypGammaIntegral,
    #[value(name = "tj_gamma")]
    TjGamma,
    #[value(name = "B22")]
    B22,
    #[value(name = "B33")]
    B33,
    #[value(name = "qpoch")]
    Qpoch,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub function: Function,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub x: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub u: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub p: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub q: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub w1: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub w2: Option<Complex64>,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub w3: Option<Complex64>,
    /// Relative truncation tolerance.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Beta,
    RhoBc,
    RhoA,
}

#[derive(Debug, Args)]
pub struct CheckTermArgs {
    /// TermSpec JSON file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub path: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Rank flags for the ρ builtins.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Evaluate every certificate under every p-shift at seeded points.
    #[arg(long)]
    pub numeric: bool,
    /// Check modular invariance at a seeded ω triple.
    #[arg(long)]
    pub modular: bool,
    #[arg(long, env = "ELLIPTIO_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.15+0.05i")]
    pub p: Complex64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true, default_value = "0.2-0.1i")]
    pub q: Complex64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: elliptio::suite::Suite,
    /// Threshold for every residual (defaults per identity).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, env = "ELLIPTIO_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of cases (defaults per suite).
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Beta,
    V,
    Bc,
    A,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    pub kind: Kind,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub p: Complex64,
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    pub q: Complex64,
    /// Free t parameters; the balancing one is computed.
    #[arg(long, value_parser = parse_c64, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<Complex64>,
    /// s parameters of the A_n integral.
    #[arg(long, value_parser = parse_c64, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<Complex64>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Absolute trapezoid tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Pole-screening margin around the torus.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Largest number of points per axis.
    #[arg(long)]
    pub nmax: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let line = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Eval(a) => commands::eval(line, a),
        Command::CheckTerm(a) => commands::check_term(line, a),
        Command::Verify(a) => commands::verify(line, a),
        Command::Integrate(a) => commands::integrate(line, a),
    };
    report.finish();
    if !cli.no_timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(e) = &report.error {
        if cli.json {
            eprintln!("error: {}", e.detail);
        }
    }
    ExitCode::from(report.exit_code())
}
