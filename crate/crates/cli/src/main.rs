//! `fuzzmeas` — compare post-measurement state transformers for fuzzy
//! quantum measurements from the command line.

mod commands;
mod config;
mod emit;
mod parse;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "fuzzmeas",
    version,
    about = "Fuzzy quantum measurements: kernels, state transformers, entropies, moments",
    after_help = "Flags left unset fall back to the --config file, then to built-in defaults."
)]
pub struct Cli {
    /// Key = value defaults file; explicit flags override it
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format for tabular subcommands
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the primary output to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a fuzzy kernel and dump it in the matrix exchange format
    Kernel(commands::KernelArgs),
    /// Run all three transformers on one state and tabulate the summary
    Compare(commands::CompareArgs),
    /// Scan fuzzy-state entropies over an (alpha, sigma) grid
    EntropyScan(commands::EntropyScanArgs),
    /// Sharp-observable moments before and after the fuzzy transformers
    Moments(commands::MomentsArgs),
    /// Shift-covariance gaps of the discrete transformers
    Covariance(commands::CovarianceArgs),
    /// Grid-discretized continuous measurement checks
    Continuous(commands::ContinuousArgs),
    /// Run the full invariant battery and print a pass/fail table
    Selfcheck(commands::SelfcheckArgs),
}

/// Errors split by exit code: usage problems exit 2, violated contracts and
/// I/O failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<fuzzmeas::Error> for CliError {
    fn from(e: fuzzmeas::Error) -> Self {
        use fuzzmeas::Error::*;
        match e {
            DimensionMismatch(_) | InvalidParameter(_) | SiteOutsideWindow { .. } | Parse(_) => {
                CliError::Usage(e.to_string())
            }
            ContractViolation(_) | Io(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = Config::load(cli.config.as_deref())?;
    let format = match cli.format {
        Some(f) => f,
        None => match config.get_str("format") {
            Some("json") => Format::Json,
            Some("csv") | None => Format::Csv,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "unknown format in config: {other}"
                )))
            }
        },
    };
    let text = match cli.command {
        Command::Kernel(args) => commands::kernel(args, &config)?,
        Command::Compare(args) => commands::compare(args, &config, format)?,
        Command::EntropyScan(args) => commands::entropy_scan(args, &config, format)?,
        Command::Moments(args) => commands::moments(args, &config, format)?,
        Command::Covariance(args) => commands::covariance(args, &config, format)?,
        Command::Continuous(args) => commands::continuous(args, &config, format)?,
        Command::Selfcheck(args) => {
            let (text, all_passed) = selfcheck::run(args, &config)?;
            emit::write_output(cli.output.as_deref(), &text)?;
            return if all_passed {
                Ok(())
            } else {
                Err(CliError::Runtime(
                    "selfcheck found failing invariants".into(),
                ))
            };
        }
    };
    emit::write_output(cli.output.as_deref(), &text)?;
    Ok(())
}
