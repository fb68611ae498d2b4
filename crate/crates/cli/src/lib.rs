//! Command-line front end for `slipstab`: configuration, parameter sweeps and
//! versioned CSV/JSON tables.

pub mod commands;
pub mod config;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::Status;
use table::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "slipstab",
    version,
    about = "Linear stability of steady frictional slip between elastic solids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Love-wave speeds and residues along the K grid.
    Dispersion(CommonArgs),
    /// Roots of the characteristic equation over the (K, eps) grid.
    Roots(CommonArgs),
    /// Compare asymptotic root formulas with found roots along a ladder.
    Verify(CommonArgs),
    /// Quasi-static growth rates and the elastodynamic extra pair.
    Quasistatic(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads for the sweep; output order does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (name, args) = match &cli.command {
        Command::Dispersion(a) => ("dispersion", a),
        Command::Roots(a) => ("roots", a),
        Command::Verify(a) => ("verify", a),
        Command::Quasistatic(a) => ("quasistatic", a),
    };
    match execute(name, args) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Unresolved) => EXIT_UNRESOLVED,
        Ok(Status::VerificationFailed) => EXIT_VERIFY,
        Err(e @ CliError::Config(_)) => {
            log::error!("{e}");
            EXIT_CONFIG
        }
        Err(e) => {
            log::error!("{e}");
            EXIT_FAILURE
        }
    }
}

fn execute(name: &str, args: &CommonArgs) -> Result<Status, CliError> {
    if args.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let cfg = config::load(&args.config)?;
    let base_dir = args.config.parent().map(PathBuf::from).unwrap_or_default();
    let setup = config::resolve(&cfg, &base_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    let outcome = pool.install(|| match name {
        "dispersion" => commands::dispersion(&setup),
        "roots" => commands::roots(&setup),
        "verify" => commands::verify(&cfg, &setup),
        _ => commands::quasistatic(&setup),
    })?;
    let mut buf = Vec::new();
    outcome.table.write(args.format, &mut buf)?;
    match &args.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&buf)?;
            out.flush()?;
        }
    }
    Ok(outcome.status)
}
