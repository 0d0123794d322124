//! `unipotent`: build and check differential equations with unipotent
//! Galois groups, and decide iterated integrability.
//!
//! Exit codes: 0 success, 1 semantic negative (not integrable, a check
//! failed), 2 input error, 3 budget exceeded.

mod commands;
mod config;
mod error;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::integrate::{Depth, FieldArg};
use commands::verify::VerifyInput;
use config::{Config, OutputFormat, CONFIG_ENV};
use error::CliError;
use report::Report;

#[derive(Parser)]
#[command(name = "unipotent", version, about)]
struct Cli {
    /// TOML config file; overrides the UNIPOTENT_CONFIG environment variable.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format; overrides the config file.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the inverse-problem pipeline on a group spec (JSON).
    Construct {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Also write the JSON report here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Expand a tuple `(f1, ..., fn)` into `L_f`, its matrix, and its solutions.
    Expand {
        #[arg(allow_hyphen_values = true)]
        tuple: String,
        /// Replace f1 so that the operator is monic.
        #[arg(long)]
        monicize: bool,
    },
    /// Decide iterated integrability. Generator names: t = exp(x), L = log(x), r = x^(1/n).
    Integrate {
        /// rational, exp, log, or radical:n
        #[arg(long)]
        field: FieldArg,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// A positive integer or `inf`.
        #[arg(long, default_value = "1")]
        depth: Depth,
    },
    /// Check that an operator kills given solutions, or that T' = A T.
    Verify {
        /// JSON file with the fields below (tower as [name, definition] pairs).
        #[arg(long, value_name = "FILE")]
        file: Option<PathBuf>,
        /// Tower generator `name=definition`, repeatable, in order.
        #[arg(long = "tower", value_name = "NAME=DEF")]
        tower: Vec<String>,
        #[arg(long)]
        operator: Option<String>,
        /// Candidate solution, repeatable.
        #[arg(long = "solution", allow_hyphen_values = true)]
        solutions: Vec<String>,
        /// The matrix A as a JSON array of rows of strings.
        #[arg(long)]
        matrix: Option<String>,
        /// The candidate fundamental matrix T, same format, entries in the tower.
        #[arg(long)]
        fundamental: Option<String>,
    },
    /// Run the built-in acceptance corpus.
    Selftest,
}

fn verify_input(
    file: Option<PathBuf>,
    tower: Vec<String>,
    operator: Option<String>,
    solutions: Vec<String>,
    matrix: Option<String>,
    fundamental: Option<String>,
) -> Result<VerifyInput, CliError> {
    if let Some(path) = file {
        if !tower.is_empty() || operator.is_some() || !solutions.is_empty() || matrix.is_some() || fundamental.is_some() {
            return Err(CliError::Input("--file cannot be combined with other verify inputs".into()));
        }
        return VerifyInput::read(&path);
    }
    Ok(VerifyInput {
        tower: tower.iter().map(|g| input::generator(g)).collect::<Result<_, _>>()?,
        operator,
        solutions,
        matrix: matrix.map(|m| input::json_matrix(&m, "--matrix")).transpose()?,
        fundamental: fundamental.map(|m| input::json_matrix(&m, "--fundamental")).transpose()?,
    })
}

fn dispatch(command: Command, config: &Config) -> Result<Report, CliError> {
    match command {
        Command::Construct { spec, out } => commands::construct::run(&spec, out.as_deref(), config),
        Command::Expand { tuple, monicize } => commands::expand::run(&tuple, monicize),
        Command::Integrate { field, expr, depth } => commands::integrate::run(field, &expr, depth),
        Command::Verify { file, tower, operator, solutions, matrix, fundamental } => {
            commands::verify::run(&verify_input(file, tower, operator, solutions, matrix, fundamental)?)
        }
        Command::Selftest => commands::selftest::run(config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("unipotent: {e} (config from --config or {CONFIG_ENV})");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let format = cli.format.unwrap_or(config.output_format);
    let start = Instant::now();
    match dispatch(cli.command, &config) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{}", report.render(format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("unipotent: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
