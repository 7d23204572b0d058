//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::parse::parse_system;
use crate::pipeline::{run_source, PipelineOptions, Stage};
use crate::report::{to_json, to_text};

#[derive(Parser, Debug)]
#[command(name = "sdres", version, about = "Sparse difference resultants of generic Laurent difference systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether the system is Laurent transformally essential.
    Check(Args),
    /// Also extract the super-essential subsystem.
    Super(Args),
    /// Also specialize and compute the modified Jacobi bounds.
    Bounds(Args),
    /// Run the whole algorithm and print the resultant.
    Resultant(Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// System file.
    pub file: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exact symbolic ranks instead of randomized ones.
    #[arg(long)]
    pub paranoid: bool,
    #[arg(long, default_value_t = 5)]
    pub max_retries: usize,
    /// Print full matrices and polynomials.
    #[arg(long)]
    pub verbose: bool,
    /// Variables to keep when specializing, e.g. `--keep 1,4`.
    #[arg(long, value_delimiter = ',')]
    pub keep: Option<Vec<u32>>,
}

impl Command {
    fn split(&self) -> (Stage, &Args) {
        match self {
            Command::Check(a) => (Stage::Check, a),
            Command::Super(a) => (Stage::Super, a),
            Command::Bounds(a) => (Stage::Bounds, a),
            Command::Resultant(a) => (Stage::Resultant, a),
        }
    }
}

/// Runs a parsed command line. Returns the report text or an error message
/// with its exit code.
pub fn execute(cli: &Cli) -> Result<String, (i32, String)> {
    let (stop, args) = cli.command.split();
    let text = std::fs::read_to_string(&args.file).map_err(|e| (1, format!("{}: {e}", args.file.display())))?;
    let src = parse_system(&text).map_err(|e| (1, format!("{}: {e}", args.file.display())))?;
    let opts = PipelineOptions {
        seed: args.seed,
        paranoid: args.paranoid,
        max_retries: args.max_retries,
        stop,
        kept_vars: args.keep.clone(),
        ..PipelineOptions::default()
    };
    let report = run_source(&src, &opts).map_err(|e| (e.exit_code(), e.to_string()))?;
    Ok(match args.format {
        Format::Text => to_text(&report, args.verbose),
        Format::Json => to_json(&report),
    })
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok(out) => {
            let (_, args) = cli.command.split();
            match &args.out {
                Some(path) => match std::fs::write(path, out) {
                    Ok(()) => 0,
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        2
                    }
                },
                None => {
                    print!("{out}");
                    0
                }
            }
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
