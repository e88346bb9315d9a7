use clap::{Args, Parser, Subcommand};
use heave::cli::{run, CliError, Command, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Heave decay of a floating cylinder in shallow water.
#[derive(Parser)]
#[command(name = "heave", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Tabulate the radiation kernel (kernel.csv).
    Kernel(Common),
    /// Integrate the equation of motion (trace_<mode>.csv).
    Simulate(Common),
    /// Compare the convolution model with the exterior grid solver.
    Validate(Common),
    /// Report the compatibility conditions of the initial data.
    Compat(Common),
    /// Energy budget of a co-simulation (energy_<mode>.csv).
    Energy(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// nonlinear, linear, conservative or both.
    #[arg(long)]
    mode: Option<String>,
    /// `key=value` overrides, applied last.
    overrides: Vec<String>,
}

fn configure(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        cfg.apply_text(&text)?;
    }
    if let Some(dir) = &common.out {
        cfg.out = dir.clone();
    }
    if let Some(mode) = &common.mode {
        cfg.apply_override(&format!("mode={mode}"))?;
    }
    for arg in &common.overrides {
        cfg.apply_override(arg)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match &cli.command {
        Sub::Kernel(c) => (Command::Kernel, c),
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Compat(c) => (Command::Compat, c),
        Sub::Energy(c) => (Command::Energy, c),
    };
    let result = configure(common).and_then(|cfg| run(cmd, &cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heave: {e}");
            ExitCode::FAILURE
        }
    }
}
