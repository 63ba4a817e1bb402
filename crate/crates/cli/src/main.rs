use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nvmag_cli::presets::{descriptions, preset};
use nvmag_cli::run::load_config;
use nvmag_cli::{run, CliError, RunOptions, Scenario};
use serde_json::json;

/// Two NV-center qubits coupled through the magnon bath of a YIG strip.
#[derive(Debug, Parser)]
#[command(name = "nvmag", version)]
struct Args {
    /// couplings | dispersion | resonance | evolve | steady | sweep.
    /// Defaults to the scenario named in the config.
    scenario: Option<Scenario>,

    /// JSON run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Bundled configuration, see --list-presets.
    #[arg(long)]
    preset: Option<String>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    workers: Option<usize>,

    #[arg(long)]
    list_presets: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if args.list_presets {
        for (name, text) in descriptions() {
            println!("{name:<16} {text}");
        }
        return ExitCode::SUCCESS;
    }
    match execute(&args) {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{}", args.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.record() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<nvmag_cli::RunManifest, CliError> {
    if args.workers == Some(0) {
        return Err(CliError::config("workers", "must be at least 1"));
    }
    let raw = match (&args.config, &args.preset) {
        (Some(path), None) => load_config(path)?,
        (None, Some(name)) => preset(name)?,
        _ => return Err(CliError::config("config", "give exactly one of --config or --preset")),
    };
    let opts = RunOptions {
        out: args.out.clone(),
        workers: args.workers,
    };
    run(&raw, args.scenario, &opts)
}
