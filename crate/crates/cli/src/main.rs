use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphon_cli::commands::{cmd_cutdist, cmd_fit_filter, cmd_sample, cmd_spectra};
use graphon_cli::config::{ModeName, RunConfig};
use graphon_cli::error::{CliError, Result};
use graphon_core::EdgeScale;

#[derive(Parser)]
#[command(name = "graphon", version, about = "Generalized-graphon pipelines for sparse graph sequences")]
struct Cli {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cut norm evaluation.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeName>,
    /// Eigenvalue normalization: E or 2E.
    #[arg(long = "edge-scale", global = true)]
    edge_scale: Option<EdgeScale>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the (t, n) grid from the configured graphon.
    Sample,
    /// Eigenvalue trajectory and scaling fits of a growing graph.
    Spectra { input: Option<String> },
    /// Filter-coefficient trajectories over nested subgraphs.
    FitFilter { input: Option<String> },
    /// Stretched cut distance between two graphs or graphons.
    Cutdist { first: Option<String>, second: Option<String> },
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(o) = cli.out {
        config.out = o;
    }
    if let Some(m) = cli.mode {
        config.cut_mode = m;
    }
    if let Some(e) = cli.edge_scale {
        config.edge_scale = e;
    }
    let bundle = match cli.command {
        Command::Sample => cmd_sample(&config)?,
        Command::Spectra { input } => {
            config.input = input.unwrap_or(config.input);
            cmd_spectra(&config)?
        }
        Command::FitFilter { input } => {
            config.input = input.unwrap_or(config.input);
            cmd_fit_filter(&config)?
        }
        Command::Cutdist { first, second } => {
            config.input = first.unwrap_or(config.input);
            config.second = second.unwrap_or(config.second);
            cmd_cutdist(&config)?
        }
    };
    println!("{} {} files in {}", bundle.run_id, bundle.files.len(), config.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string() + ": " + e.render().to_string().trim());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
