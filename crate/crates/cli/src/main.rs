use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gamma_ops_cli::commands::{self, Outcome};
use gamma_ops_cli::{CliError, Format};

/// Commuting matrix differential operators from spectral data on a glued
/// quadric surface.
#[derive(Parser)]
#[command(name = "gamma-ops", version)]
struct Cli {
    /// Session file; the built-in reference session when absent.
    #[arg(long, global = true)]
    session: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Print only failures; no timing.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every reference check and print a pass/fail table.
    Reproduce,
    /// Construct D(lambda) for `lambda1`..`lambda4`, `1`, or `m:g`.
    Construct {
        #[arg(long)]
        lambda: String,
    },
    /// Check that all pairs of the given operators commute.
    VerifyCommute {
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
        /// Operator JSON documents.
        #[arg(long = "operator")]
        operators: Vec<PathBuf>,
    },
    /// Tabulate rank M(n) against n(n+1).
    Rank {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Re-emit an operator JSON document in the chosen format.
    Emit {
        #[arg(long)]
        input: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Emit { input } = &cli.command {
        return commands::cmd_emit(input, cli.format);
    }
    let config = commands::load_session(cli.session.as_deref())?;
    match &cli.command {
        Command::Reproduce => Ok(commands::cmd_reproduce(&config, cli.format, cli.quiet)),
        Command::Construct { lambda } => commands::cmd_construct(&config, lambda, cli.format),
        Command::VerifyCommute { lambdas, operators } => {
            let paths: Vec<_> = operators.iter().map(PathBuf::as_path).collect();
            commands::cmd_verify_commute(&config, lambdas, &paths)
        }
        Command::Rank { n_max } => commands::cmd_rank(&config, *n_max, cli.format),
        Command::Emit { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !cli.quiet {
                eprint!("{}", out.stderr);
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
