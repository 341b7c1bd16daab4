use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jcm_cli::catalog::{ObservableKind, CATALOG};
use jcm_cli::runner::{run_file, summarize, Overrides};

/// Simulator of a two-level atom coupled to a single quantized cavity mode.
///
/// Scenarios are JSON files describing the model parameters, the initial
/// atom-field state, the evolution window, and the observables to record;
/// results are deterministic CSV files plus a manifest.
#[derive(Parser)]
#[command(name = "jcm-sim", version, disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write its artifacts.
    Run {
        /// Path to the scenario JSON file.
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Fail instead of warn when the truncation tail mass exceeds 1e-8.
        #[arg(long)]
        strict: bool,
        /// Override the truncation dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// List every observable the runner can schedule.
    ListObservables,
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    if let Ok(value) = std::env::var("JCM_SIM_THREADS") {
        match value.trim().parse::<usize>() {
            Ok(0) => {} // auto
            Ok(threads) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
            Err(_) => {
                eprintln!("warning: ignoring non-numeric JCM_SIM_THREADS={value:?}");
            }
        }
    }

    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, strict, dim } => {
            match run_file(&config, &out, &Overrides { strict, dim }) {
                Ok(manifest) => {
                    println!("{}", summarize(&manifest, &out));
                    ExitCode::SUCCESS
                }
                Err(error) => {
                    eprintln!("error: {error}");
                    ExitCode::from(error.exit_code() as u8)
                }
            }
        }
        Command::ListObservables => {
            println!("{:<22} {:<13} {:<12} description", "name", "kind", "module");
            for entry in CATALOG {
                let kind = match entry.kind {
                    ObservableKind::Series => "series",
                    ObservableKind::Distribution => "distribution",
                    ObservableKind::Grid => "grid",
                };
                println!("{:<22} {:<13} {:<12} {}", entry.name, kind, entry.module, entry.description);
            }
            ExitCode::SUCCESS
        }
        Command::Version => {
            println!("jcm-sim {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}
