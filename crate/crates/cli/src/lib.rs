//! Command-line harness for `geotsp`: instance generation, geodesics,
//! tours, exact solvers and the Monte Carlo experiments, with CSV/JSON
//! reports and SVG plots.

pub mod args;
pub mod commands;
pub mod config;
pub mod plot;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command};
pub use plot::{emit_plot, render_svg, PlotError, PlotKind, PlotSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("INFEASIBLE: {0}")]
    Infeasible(String),
    #[error("FAILURE: {0}")]
    Failure(String),
    #[error(transparent)]
    Core(#[from] geotsp::Error),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Core(geotsp::Error::InvalidParameter(_)) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

/// Parses `args` (program name first), applies any `--config` file and
/// runs the subcommand on a pool of `--workers` threads. Returns the exit
/// code; results go to standard output, errors to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let _ = commands::print_lines(&mut std::io::stdout().lock(), &out.lines);
            for f in &out.files {
                log::info!("wrote {}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Runs `cli` on its own thread pool.
pub fn execute(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {:?} workers: {e}", cli.global.workers)))?;
    pool.install(|| commands::dispatch(cli))
}
