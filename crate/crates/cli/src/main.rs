//! `ratsos`: exact sum-of-squares certificates from the command line.
//!
//! Exit codes: 0 certificate, 1 no decomposition under the applied
//! conditions, 2 inconclusive, 64 unreadable input or bad usage.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ratsos", version, about = "Exact rational sum-of-squares certificates via facial reduction")]
struct Cli {
    /// More log output on stderr (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for an exact SOS certificate of a form.
    Decompose(DecomposeArgs),
    /// Check a certificate file against a form.
    Verify(VerifyArgs),
    /// Print the Gram pencil size, dimension and generic rank.
    Pencil(PencilArgs),
    /// Two-squares descent from p1² + p2² over a number field.
    Descend2(Descend2Args),
    /// Three squares over ℚ(∛2) with a rational sum.
    Gen3(Gen3Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

#[derive(Args, Debug)]
struct PolyInput {
    /// Polynomial file (`-` for stdin). Optional header lines `vars: x, y, z`.
    input: PathBuf,
    /// Variable order, overriding the file header (comma separated).
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    poly: PolyInput,
    /// Zeros file: `minpoly: <poly in Z> ; coords: <expr in a>, ...` per line.
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Also use integer zeros with coordinates up to this bound (0 = off).
    #[arg(long, default_value_t = 0)]
    search_zeros: u32,
    /// Use rational trace constraints for irrational zeros.
    #[arg(long, value_enum, default_value_t = YesNo::Yes)]
    trace_equations: YesNo,
    /// Force rational entries when the reduced pencil is algebraic.
    #[arg(long, value_enum, default_value_t = YesNo::No)]
    force_rational: YesNo,
    /// Skip singular 2×2 minor ghosts.
    #[arg(long)]
    no_minor_ghosts: bool,
    /// Initial denominator bound for rounding.
    #[arg(long, default_value_t = 1_000_000)]
    max_denom: u64,
    /// Relative duality-gap tolerance of the eigenvalue solver.
    #[arg(long, default_value_t = 1e-12)]
    sdp_tol: f64,
    /// Newton step budget of the eigenvalue solver.
    #[arg(long, default_value_t = 2000)]
    sdp_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the certificate to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print the run report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Certificate file.
    certificate: PathBuf,
    #[command(flatten)]
    poly: PolyInput,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PencilArgs {
    #[command(flatten)]
    poly: PolyInput,
    /// The input is a pencil dump rather than a polynomial.
    #[arg(long)]
    from_dump: bool,
    /// Write the pencil dump to this file.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Descend2Args {
    /// Defining polynomial of the generator `a`, in `Z`.
    #[arg(long)]
    minpoly: String,
    /// Variable order (comma separated); default is order of appearance.
    #[arg(long)]
    vars: Option<String>,
    /// Bound on gcd extractions.
    #[arg(long, default_value_t = 32)]
    max_depth: usize,
    /// First polynomial, an expression in the variables and `a`.
    p1: String,
    /// Second polynomial.
    p2: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Gen3Args {
    /// Variable order (comma separated); default is order of appearance.
    #[arg(long)]
    vars: Option<String>,
    /// a3 b1 b2 b3 c1 c2 c3 as rational expressions.
    #[arg(num_args = 7, value_names = ["A3", "B1", "B2", "B3", "C1", "C2", "C3"])]
    inputs: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::USAGE_EXIT } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Decompose(a) => commands::decompose(a),
        Command::Verify(a) => commands::verify(a),
        Command::Pencil(a) => commands::pencil(a),
        Command::Descend2(a) => commands::descend2(a),
        Command::Gen3(a) => commands::gen3(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
