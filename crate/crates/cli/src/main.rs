use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use curvedflat_cli::commands::COMMANDS;
use curvedflat_cli::{run, PipelineConfig};

/// Quaternionic surface transformations from the command line.
#[derive(Parser)]
#[command(name = "curvedflat", version)]
struct Args {
    /// One of: minimal, christoffel, goursat, darboux, bryant, validate, crossratio.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
    /// Flat `key = value` file; `--key value` arguments override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `--key value` overrides and positional arguments.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    rest: Vec<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = std::env::var("CURVEDFLAT_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        // only fails if a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let result = PipelineConfig::build(&args.command, args.config.as_deref(), &args.rest)
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
