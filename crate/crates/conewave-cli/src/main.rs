mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Output, EXIT_ERROR, EXIT_USAGE};
use config::{Format, RunConfig, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Numeric(#[from] conewave::Error),
}

/// Euler–Lagrange checks for exponential candidates of the cone extension inequality.
#[derive(Debug, Parser)]
#[command(name = "conewave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Decide critical point vs certified failure for (d, p); writes the verdict document.
    Verdict,
    /// Both sides of the identity for k in [k-min, k-max].
    ElTable,
    /// Penrose-geometry residuals: Funk–Hecke, maps, pushforward, intertwining, unfolding.
    PenroseCheck,
    /// Closed form vs quadrature for ∫ J_mu J_nu τ^{-lambda} dτ.
    Watson,
    /// Funk–Hecke eigenvalues of the inverse spherical operator for l ≤ l-max.
    FunkHecke,
    /// Group law, admissibility closure and measure invariance of the symmetries.
    SymmetryCheck,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let settings = Settings::resolve(cli.settings)?;
    let default_format = match cli.command {
        Command::Verdict => Format::Json,
        _ => Format::Csv,
    };
    let rc = RunConfig::new(settings, default_format)?;
    let out = match cli.command {
        Command::Verdict => commands::verdict(&rc),
        Command::ElTable => commands::el_table(&rc),
        Command::PenroseCheck => commands::penrose_check(&rc),
        Command::Watson => commands::watson(&rc),
        Command::FunkHecke => commands::funk_hecke(&rc),
        Command::SymmetryCheck => commands::symmetry_check(&rc),
    }?;
    match &rc.out {
        Some(path) => std::fs::write(path, &out.text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().write_all(out.text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => ExitCode::from(out.code),
        Err(e) => {
            eprintln!("conewave: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                _ => EXIT_ERROR,
            })
        }
    }
}
