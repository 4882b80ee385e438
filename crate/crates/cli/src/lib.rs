//! Command-line front end for `cohphase`: phase distributions, squeezing
//! sweeps, crossover searches and an invariant check, written as CSV or
//! JSON.
//!
//! Exit codes: 0 success, 1 failed invariant, 2 usage or configuration
//! error, 3 numerical failure (no convergence, `z` outside the disk,
//! overflow).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};

pub use commands::{Artifact, Which};
pub use config::{RunArgs, RunConfig};
pub use error::CliError;

use error::EXIT_OK;

/// Caps the sweep thread pool when set.
pub const THREADS_VAR: &str = "COHPHASE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cohphase", version, about = "Phase properties of nonlinear coherent states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase distribution P(θ) over the window, one column per z.
    Dist(RunArgs),
    /// Variances, commutator and squeezing parameters along a z sweep.
    Squeeze(RunArgs),
    /// Values of z where S_n or S_phi changes sign.
    Crossover {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, value_enum, default_value = "Sn")]
        which: Which,
    },
    /// Run the invariant suite on a system.
    Check {
        #[command(flatten)]
        args: RunArgs,
        /// Check every catalog entry.
        #[arg(long, conflicts_with_all = ["system", "config", "preset"])]
        all: bool,
    },
}

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}

fn with_thread_cap<T: Send>(f: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return f();
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} = `{value}` is not a positive integer")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let (cfg, artifact) = match cli.command {
        Command::Dist(args) => {
            let cfg = args.resolve()?;
            let a = with_thread_cap(|| commands::dist(&cfg))?;
            (cfg, a)
        }
        Command::Squeeze(args) => {
            let cfg = args.resolve()?;
            let a = with_thread_cap(|| commands::squeeze(&cfg))?;
            (cfg, a)
        }
        Command::Crossover { args, which } => {
            let cfg = args.resolve()?;
            let a = with_thread_cap(|| commands::crossover(&cfg, which))?;
            (cfg, a)
        }
        Command::Check { args, all } => {
            let (system, policy) = if all {
                let mut cfg = RunConfig::new(config::SystemConfig::catalog(cohphase::SystemId::Harmonic));
                if let Some(t) = args.tail_tol {
                    cfg.tail_tol = t;
                }
                if let Some(n) = args.n_cap {
                    cfg.n_cap = n;
                }
                (None, cfg.policy()?)
            } else {
                let cfg = args.resolve()?;
                (Some(cfg.system.clone()), cfg.policy()?)
            };
            let (report, rows) = with_thread_cap(|| commands::check(system.as_ref(), &policy))?;
            write_stdout(stdout, &report)?;
            return commands::check_verdict(&rows);
        }
    };
    for w in &artifact.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &artifact.text).map_err(|source| io_error(path, source)),
        None => write_stdout(stdout, &artifact.text),
    }
}

/// A reader that stops early (`| head`) is not an error.
fn write_stdout(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_error("<stdout>", e)),
        _ => Ok(()),
    }
}

fn io_error(path: impl AsRef<Path>, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.as_ref().to_path_buf(),
        source,
    }
}
