use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nderiv::characterize::DEFAULT_PROBES;
use nderiv::cli::{self, Outcome, StabilizeArgs, EXIT_USAGE};
use nderiv::exactfield::{parse_rational, Rational};
use nderiv::operators::DEFAULT_TRIALS;
use nderiv::stability::{ProbeSet, DEFAULT_DEPTH, DEFAULT_SAMPLES};

/// Exact checks for higher-order derivations, polynomial functions and Hyers
/// stabilization. Reports go to stdout as JSON, a summary to stderr.
#[derive(Parser, Debug)]
#[command(name = "nderiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether an operator is a derivation of order n.
    CheckOrder {
        /// Operator expression, e.g. "t*D^2 + D".
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split an operator into an order-n derivation plus f(1)*id.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decompose a polynomial in x into homogeneous components by finite differences.
    PolyDecompose {
        /// Polynomial in x, e.g. "x^2 + 3*x + 1".
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the Hyers stabilizer on a fixture ("noisy:<lambda>" or a polynomial in x).
    Stabilize {
        #[arg(allow_hyphen_values = true)]
        fixture: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/100", value_parser = rational)]
        epsilon: Rational,
        #[arg(long = "range-bound", default_value = "10", value_parser = rational)]
        range_bound: Rational,
        /// Write the probe points used, one rational per line.
        #[arg(long)]
        dump_probes: Option<PathBuf>,
        /// Read probe points from a file instead of sampling them.
        #[arg(long, conflicts_with = "dump_probes")]
        load_probes: Option<PathBuf>,
    },
    /// Print the canonical form of an expression.
    Canon {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "t")]
        var: String,
    },
}

fn emit(outcome: Outcome) -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.json.as_bytes());
    eprintln!("{}", outcome.summary);
    ExitCode::from(outcome.exit_code)
}

fn run(cli: Cli) -> nderiv::Result<ExitCode> {
    Ok(match cli.command {
        Command::CheckOrder {
            expr,
            n,
            trials,
            seed,
        } => emit(cli::cmd_check_order(&expr, n, trials, seed)?),
        Command::Decompose {
            expr,
            n,
            trials,
            seed,
        } => emit(cli::cmd_decompose(&expr, n, trials, seed)?),
        Command::PolyDecompose {
            expr,
            n,
            probes,
            seed,
        } => emit(cli::cmd_poly_decompose(&expr, n, probes, seed)?),
        Command::Stabilize {
            fixture,
            n,
            depth,
            samples,
            seed,
            epsilon,
            range_bound,
            dump_probes,
            load_probes,
        } => {
            let probes = match load_probes {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| {
                        nderiv::Error::InvalidArgument(format!("{}: {e}", path.display()))
                    })?;
                    Some(ProbeSet::from_text(&text)?)
                }
                None => None,
            };
            let args = StabilizeArgs {
                fixture,
                n,
                depth,
                samples,
                seed,
                epsilon,
                range_bound,
                probes,
            };
            let (outcome, used) = cli::cmd_stabilize(&args)?;
            if let Some(path) = dump_probes {
                fs::write(&path, used.to_text()).map_err(|e| {
                    nderiv::Error::InvalidArgument(format!("{}: {e}", path.display()))
                })?;
            }
            emit(outcome)
        }
        Command::Canon { expr, var } => {
            println!("{}", cli::cmd_canon(&expr, &var)?);
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
