//! Flag and config-file parsing into a resolved [`RunConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use nlho_gcs::{ModelParams64, SeriesStart};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    State,
    Observables,
    Verify,
    Evolve,
    Revival,
    Mandel,
    Eom,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::State => "state",
            Command::Observables => "observables",
            Command::Verify => "verify",
            Command::Evolve => "evolve",
            Command::Revival => "revival",
            Command::Mandel => "mandel",
            Command::Eom => "eom",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Inclusive grid `start:stop:step`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    stop: f64,
    step: f64,
}

impl Grid {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if step <= 0.0 {
            return Err("grid step must be positive".into());
        }
        if stop < start {
            return Err("grid stop lies below start".into());
        }
        Ok(Self { start, stop, step })
    }

    /// `start + k step` for every `k` that stays within `stop` (up to rounding).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("invalid number {v:?}: {e}"))
        };
        match s.split(':').collect::<Vec<_>>().as_slice() {
            [v] => {
                let v = parse(v)?;
                if !v.is_finite() {
                    return Err("value must be finite".into());
                }
                Ok(Grid::single(v))
            }
            [a, b, c] => Grid::new(parse(a)?, parse(b)?, parse(c)?),
            _ => Err(format!("expected a value or start:stop:step, got {s:?}")),
        }
    }
}

/// Config-file grids may be bare numbers or `start:stop:step` strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GridValue {
    Number(f64),
    Text(String),
}

impl GridValue {
    fn into_grid(self, key: &str) -> Result<Grid, CliError> {
        match self {
            GridValue::Number(v) if v.is_finite() => Ok(Grid::single(v)),
            GridValue::Number(_) => Err("value must be finite".into()),
            GridValue::Text(s) => Grid::from_str(&s),
        }
        .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nlho",
    version,
    about = "Coherent states of the nonlinear oscillator: sweeps and checks"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda_prime")]
    pub lambda: Option<f64>,
    /// Value or start:stop:step.
    #[arg(
        long = "lambda-prime",
        visible_alias = "lambda-prime-range",
        allow_hyphen_values = true
    )]
    pub lambda_prime: Option<Grid>,
    /// Value or start:stop:step.
    #[arg(long = "J", visible_alias = "J-range")]
    pub j: Option<Grid>,
    /// Value or start:stop:step.
    #[arg(long, visible_alias = "gamma-range", allow_hyphen_values = true)]
    pub gamma: Option<Grid>,
    /// Value or start:stop:step.
    #[arg(long, visible_alias = "t-range", allow_hyphen_values = true)]
    pub t: Option<Grid>,
    #[arg(long = "n-start", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub n_start: Option<u8>,
    /// Highest level tabulated by `spectrum`.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[arg(long = "dim-guard")]
    pub dim_guard: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Exit 1 when any row falls outside the domain of validity.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// TOML file with the same keys as the flags (underscores for dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    beta: Option<f64>,
    lambda: Option<f64>,
    lambda_prime: Option<GridValue>,
    #[serde(rename = "J")]
    j: Option<GridValue>,
    gamma: Option<GridValue>,
    t: Option<GridValue>,
    n_start: Option<u8>,
    n_max: Option<usize>,
    dim_guard: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    strict: Option<bool>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Lambda(f64),
    LambdaPrime(Grid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: f64,
    pub coupling: Coupling,
    pub j: Grid,
    pub gamma: Grid,
    /// Command-specific default when absent.
    pub t: Option<Grid>,
    pub n_start: SeriesStart,
    pub n_max: usize,
    pub dim_guard: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub strict: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            beta: 1.0,
            coupling: Coupling::Lambda(0.0),
            j: Grid::single(1.0),
            gamma: Grid::single(0.0),
            t: None,
            n_start: SeriesStart::Vacuum,
            n_max: 20,
            dim_guard: nlho_gcs::gcs::DEFAULT_DIM_GUARD,
            out: None,
            format: Format::Csv,
            strict: false,
            seed: 0,
        }
    }

    /// Merges the optional config file under the flags.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let grid = |flag: Option<Grid>,
                    value: Option<GridValue>,
                    key: &str|
         -> Result<Option<Grid>, CliError> {
            match (flag, value) {
                (Some(g), _) => Ok(Some(g)),
                (None, Some(v)) => v.into_grid(key).map(Some),
                (None, None) => Ok(None),
            }
        };
        let mut cfg = RunConfig::new(cli.command);
        cfg.beta = cli.beta.or(file.beta).unwrap_or(cfg.beta);
        cfg.coupling = if cli.lambda.is_some() || cli.lambda_prime.is_some() {
            match (cli.lambda, cli.lambda_prime) {
                (Some(l), _) => Coupling::Lambda(l),
                (None, Some(g)) => Coupling::LambdaPrime(g),
                (None, None) => unreachable!(),
            }
        } else {
            match (file.lambda, file.lambda_prime) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "config sets both lambda and lambda_prime".into(),
                    ))
                }
                (Some(l), None) => Coupling::Lambda(l),
                (None, Some(v)) => Coupling::LambdaPrime(v.into_grid("lambda_prime")?),
                (None, None) => cfg.coupling,
            }
        };
        if let Some(g) = grid(cli.j, file.j, "J")? {
            cfg.j = g;
        }
        if let Some(g) = grid(cli.gamma, file.gamma, "gamma")? {
            cfg.gamma = g;
        }
        cfg.t = grid(cli.t, file.t, "t")?;
        if let Some(n) = cli.n_start.or(file.n_start) {
            cfg.n_start = SeriesStart::from_index(n as usize)
                .ok_or_else(|| CliError::Usage(format!("n_start must be 0 or 1, got {n}")))?;
        }
        cfg.n_max = cli.n_max.or(file.n_max).unwrap_or(cfg.n_max);
        cfg.dim_guard = cli.dim_guard.or(file.dim_guard).unwrap_or(cfg.dim_guard);
        cfg.out = cli.out.or(file.out);
        cfg.format = cli.format.or(file.format).unwrap_or_default();
        cfg.strict = cli.strict || file.strict.unwrap_or(false);
        cfg.seed = cli.seed.or(file.seed).unwrap_or(0);
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.dim_guard > 0.0 && self.dim_guard < 1.0) {
            return Err(CliError::Usage("dim_guard must lie in (0, 1)".into()));
        }
        if self.j.points().iter().any(|&j| j < 0.0) {
            return Err(CliError::Usage("J must be nonnegative".into()));
        }
        self.parameter_sets()?;
        Ok(())
    }

    /// One parameter set per `lambda'` grid point, or the single `lambda`.
    pub fn parameter_sets(&self) -> Result<Vec<ModelParams64>, CliError> {
        let usage = |e: nlho_gcs::Error| CliError::Usage(e.to_string());
        match self.coupling {
            Coupling::Lambda(l) => Ok(vec![ModelParams64::new(self.beta, l).map_err(usage)?]),
            Coupling::LambdaPrime(g) => g
                .points()
                .into_iter()
                .map(|lp| ModelParams64::with_lambda_prime(self.beta, lp).map_err(usage))
                .collect(),
        }
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
