//! Command-line front end for `nlho-gcs`: parameter sweeps emitted as CSV or JSON rows
//! pairing each closed-form value with its brute-force counterpart.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;

pub use config::{Cli, Command, Format, Grid, RunConfig};
pub use emit::{emit, Row};
pub use error::CliError;
pub use run::{run, Outcome};

/// Runs the resolved config and writes its rows; returns the process exit code.
pub fn execute(cfg: &RunConfig) -> Result<i32, CliError> {
    let outcome = run(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            let mut w = BufWriter::new(file);
            emit(&outcome.rows, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => emit(&outcome.rows, cfg.format, io::stdout().lock())?,
    }
    let failures = outcome.invariant_failures();
    if failures > 0 {
        eprintln!("{failures} row(s) violate a hard invariant");
    }
    if cfg.strict && outcome.domain_failures() > 0 {
        eprintln!(
            "{} row(s) fall outside the domain of validity",
            outcome.domain_failures()
        );
    }
    Ok(outcome.exit_code(cfg.strict))
}

pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| execute(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nlho: {e}");
            e.exit_code()
        }
    }
}
