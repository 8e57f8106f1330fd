//! `fracou` command-line front end.
//!
//! Exit codes: 0 success or passing check, 1 I/O failure, 2 invalid
//! parameters, 3 accuracy failure, 4 unreachable truncation tolerance,
//! 5 failing check, 6 inconclusive check.
//!
//! The worker thread count is read from `FRACOU_THREADS`; it never changes
//! the output.

mod args;
mod commands;

use std::fs;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use fracou::Error;

use args::{Cli, Command};

const THREADS_VAR: &str = "FRACOU_THREADS";

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Condition { .. } => 2,
        Error::Accuracy { .. } | Error::Quadrature(_) | Error::Factorization(_) => 3,
        Error::Truncation { .. } => 4,
        Error::Io(_) | Error::Json(_) => 1,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Reads a run configuration: either a bare config or a sidecar with a
/// `config` field.
fn load_config(path: &std::path::Path) -> Result<Command, Error> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let cfg = v.get("config").cloned().unwrap_or(v);
    Ok(serde_json::from_value(cfg)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cmd = match (cli.replay, cli.command) {
        (Some(path), _) => match load_config(&path) {
            Ok(mut c) => {
                if let Some(out) = cli.out {
                    *c.out_mut() = out;
                }
                c
            }
            Err(e) => {
                eprintln!("error: cannot replay {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, Some(c)) => c,
        (None, None) => {
            let _ = Cli::command().print_help();
            return ExitCode::from(2);
        }
    };
    match commands::run(cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
