//! Row schema and CSV/JSON serialization.

use std::io::Write;

use serde::Serialize;

use crate::config::{Command, Format};
use crate::error::CliError;

pub const HEADER: [&str; 12] = [
    "command",
    "beta",
    "lambda",
    "lambda_prime",
    "J",
    "gamma",
    "t",
    "observable",
    "analytic",
    "numeric",
    "discrepancy",
    "flags",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub command: Command,
    pub beta: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    pub gamma: Option<f64>,
    pub t: Option<f64>,
    pub observable: String,
    pub analytic: Option<f64>,
    pub numeric: Option<f64>,
    pub discrepancy: Option<f64>,
    /// `;`-separated flag names.
    pub flags: String,
}

impl Row {
    pub fn flag_list(&self) -> impl Iterator<Item = &str> {
        self.flags.split(';').filter(|f| !f.is_empty())
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flag_list().any(|f| f == flag)
    }
}

fn number(v: Option<f64>) -> String {
    // 17 significant digits round-trip every f64
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.command.name().to_string(),
            number(Some(r.beta)),
            number(Some(r.lambda)),
            number(Some(r.lambda_prime)),
            number(r.j),
            number(r.gamma),
            number(r.t),
            r.observable.clone(),
            number(r.analytic),
            number(r.numeric),
            number(r.discrepancy),
            r.flags.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn emit<W: Write>(rows: &[Row], format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}
