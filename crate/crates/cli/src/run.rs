//! Command execution: every grid point becomes one or more [`Row`]s.

use std::f64::consts::PI;

use nlho_gcs::algebra::hamiltonian_fock;
use nlho_gcs::analytic::{self, mandel_roots};
use nlho_gcs::dynamics::{eom_comparison, evolve, state_autocorrelation, timescales};
use nlho_gcs::gcs::{build_state, normalization_sq, numeric_observables};
use nlho_gcs::report::ObservableReport;
use nlho_gcs::verify::{mandel_scan, MandelRoute, MandelVerdict};
use nlho_gcs::{Error, GKState64, ModelParams64, Observable, SpectrumTable, StateOptions64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Command, Grid, RunConfig};
use crate::emit::Row;

/// Largest norm or relabeling error tolerated before a row counts as an invariant violation.
pub const INVARIANT_TOLERANCE: f64 = 1e-12;
/// Random draws per parameter set in the `verify` temporal-stability check.
pub const STABILITY_DRAWS: usize = 20;
/// Points per revival period when no time grid is given.
pub const REVIVAL_POINTS: usize = 400;
/// Bisection tolerance for the numeric Mandel root.
pub const MANDEL_TOLERANCE: f64 = 1e-3;

pub const INVARIANT_VIOLATION: &str = "invariant_violation";
/// Flags that mark a row as outside the domain of validity.
pub const DOMAIN_FLAGS: [&str; 3] = ["tail_beyond_guard", "dimension_exhausted", "domain_error"];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rows: Vec<Row>,
}

impl Outcome {
    pub fn invariant_failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.has_flag(INVARIANT_VIOLATION))
            .count()
    }

    pub fn domain_failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| DOMAIN_FLAGS.iter().any(|f| r.has_flag(f)))
            .count()
    }

    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.invariant_failures() > 0 || (strict && self.domain_failures() > 0) {
            1
        } else {
            0
        }
    }
}

#[derive(Clone)]
struct RowBuilder {
    command: Command,
    params: ModelParams64,
    j: Option<f64>,
    gamma: Option<f64>,
    t: Option<f64>,
    flags: Vec<String>,
}

impl RowBuilder {
    fn new(command: Command, params: &ModelParams64) -> Self {
        Self {
            command,
            params: *params,
            j: None,
            gamma: None,
            t: None,
            flags: Vec::new(),
        }
    }

    fn at(mut self, j: Option<f64>, gamma: Option<f64>, t: Option<f64>) -> Self {
        self.j = j;
        self.gamma = gamma;
        self.t = t;
        self
    }

    fn flagged(mut self, flags: &[String]) -> Self {
        self.flags.extend_from_slice(flags);
        self
    }

    fn row(&self, observable: &str, analytic: Option<f64>, numeric: Option<f64>) -> Row {
        self.row_with(observable, analytic, numeric, &[])
    }

    fn row_with(
        &self,
        observable: &str,
        analytic: Option<f64>,
        numeric: Option<f64>,
        extra: &[&str],
    ) -> Row {
        let mut flags = self.flags.clone();
        flags.extend(extra.iter().map(|s| s.to_string()));
        Row {
            command: self.command,
            beta: self.params.beta(),
            lambda: self.params.lambda(),
            lambda_prime: self.params.lambda_prime(),
            j: self.j,
            gamma: self.gamma,
            t: self.t,
            observable: observable.to_string(),
            analytic,
            numeric,
            discrepancy: analytic.zip(numeric).map(|(a, n)| (a - n).abs()),
            flags: flags.join(";"),
        }
    }

    /// Row carrying only a domain failure.
    fn failure(&self, observable: &str, flag: &str) -> Row {
        self.row_with(observable, None, None, &[flag])
    }
}

fn options(cfg: &RunConfig) -> StateOptions64 {
    StateOptions64 {
        n_start: cfg.n_start,
        dim_guard: cfg.dim_guard,
        tail_guard: cfg.dim_guard,
        ..StateOptions64::default()
    }
}

fn failure_flag(e: &Error) -> &'static str {
    match e {
        Error::DimensionExhausted { .. } => "dimension_exhausted",
        Error::TailBeyondCutoff { .. } => "tail_beyond_guard",
        _ => "domain_error",
    }
}

/// Builds the state; a cutoff tail above the guard is accepted but flagged.
fn prepare(
    params: &ModelParams64,
    j: f64,
    gamma: f64,
    opts: &StateOptions64,
) -> Result<(GKState64, Vec<String>), &'static str> {
    match build_state(params, j, gamma, opts) {
        Ok(s) => Ok((s, Vec::new())),
        Err(Error::TailBeyondCutoff { .. }) => {
            let lenient = StateOptions64 {
                tail_guard: f64::INFINITY,
                ..*opts
            };
            build_state(params, j, gamma, &lenient)
                .map(|s| (s, vec!["tail_beyond_guard".to_string()]))
                .map_err(|e| failure_flag(&e))
        }
        Err(e) => Err(failure_flag(&e)),
    }
}

fn grid_product(params: &[ModelParams64], a: &Grid, b: &Grid) -> Vec<(ModelParams64, f64, f64)> {
    let (a, b) = (a.points(), b.points());
    let mut out = Vec::with_capacity(params.len() * a.len() * b.len());
    for p in params {
        for &x in &a {
            for &y in &b {
                out.push((*p, x, y));
            }
        }
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, crate::error::CliError> {
    let params = cfg.parameter_sets()?;
    let rows = match cfg.command {
        Command::Spectrum => params.iter().flat_map(|p| spectrum_rows(cfg, p)).collect(),
        Command::State => par_rows(grid_product(&params, &cfg.j, &cfg.gamma), |(p, j, g)| {
            state_rows(cfg, &p, j, g)
        }),
        Command::Observables => par_rows(grid_product(&params, &cfg.j, &cfg.gamma), |(p, j, g)| {
            observable_rows(cfg, &p, j, g)
        }),
        Command::Verify => verify_rows(cfg, &params),
        Command::Evolve => evolve_rows(cfg, &params),
        Command::Revival => params.iter().flat_map(|p| revival_rows(cfg, p)).collect(),
        Command::Mandel => params.iter().flat_map(|p| mandel_rows(cfg, p)).collect(),
        Command::Eom => par_rows(grid_product(&params, &cfg.j, &cfg.gamma), |(p, j, g)| {
            eom_rows(cfg, &p, j, g)
        }),
    };
    Ok(Outcome { rows })
}

/// Evaluates grid points in parallel; rows keep grid order.
fn par_rows<P: Send + Sync + Copy>(
    points: Vec<P>,
    f: impl Fn(P) -> Vec<Row> + Send + Sync,
) -> Vec<Row> {
    points
        .par_iter()
        .map(|&p| f(p))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn spectrum_rows(cfg: &RunConfig, params: &ModelParams64) -> Vec<Row> {
    let b = RowBuilder::new(cfg.command, params);
    let table = SpectrumTable::new(*params, cfg.n_max);
    let last = table.entries.last().map_or(0, |e| e.n);
    // five spare rows keep the reported diagonal clear of truncation
    let h = hamiltonian_fock(params).to_matrix(last + 6);
    let (beta, lambda) = (params.beta(), params.lambda());
    let mut rows = Vec::new();
    for e in &table.entries {
        let n = e.n as f64;
        rows.push(b.row(&format!("energy:{}", e.n), Some(e.energy), None));
        let printed = beta * n - lambda * n * n / 2.0 + beta - lambda / 4.0;
        rows.push(b.row(
            &format!("h_diag:{}", e.n),
            Some(printed),
            Some(h.get(e.n, e.n).re),
        ));
    }
    rows
}

fn state_rows(cfg: &RunConfig, params: &ModelParams64, j: f64, gamma: f64) -> Vec<Row> {
    let b = RowBuilder::new(cfg.command, params).at(Some(j), Some(gamma), None);
    let (state, flags) = match prepare(params, j, gamma, &options(cfg)) {
        Ok(v) => v,
        Err(flag) => return vec![b.failure("norm", flag)],
    };
    let b = b.flagged(&flags);
    let norm = state.coefficients().norm_sqr();
    let norm_flag: &[&str] = if (norm - 1.0).abs() > INVARIANT_TOLERANCE {
        &[INVARIANT_VIOLATION]
    } else {
        &[]
    };
    let mut rows = vec![
        b.row_with("norm", Some(1.0), Some(norm), norm_flag),
        b.row("tail_mass", None, Some(state.tail_mass())),
        b.row("dim", None, Some(state.dim() as f64)),
    ];
    let total = normalization_sq(params, j, cfg.n_start).ok();
    for (n, &p) in state.probabilities().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let closed = total.zip(params.log_rho(n).ok()).map(|(total, lr)| {
            let log_w = if j > 0.0 { n as f64 * j.ln() } else { 0.0 };
            (log_w - lr).exp() / total
        });
        rows.push(b.row(&format!("prob:{n}"), closed, Some(p)));
    }
    rows
}

fn report_rows(b: &RowBuilder, report: &ObservableReport<f64>) -> Vec<Row> {
    let flags: Vec<String> = report.flags.iter().map(|f| f.name().to_string()).collect();
    let b = b.clone().flagged(&flags);
    report
        .pairs
        .iter()
        .map(|p| b.row(p.observable.name(), Some(p.analytic), p.numeric))
        .collect()
}

fn observable_rows(cfg: &RunConfig, params: &ModelParams64, j: f64, gamma: f64) -> Vec<Row> {
    let b = RowBuilder::new(cfg.command, params).at(Some(j), Some(gamma), None);
    let (state, flags) = match prepare(params, j, gamma, &options(cfg)) {
        Ok(v) => v,
        Err(flag) => {
            return Observable::ALL
                .iter()
                .map(|o| b.failure(o.name(), flag))
                .collect()
        }
    };
    match numeric_observables(&state) {
        Ok(numeric) => report_rows(
            &b.flagged(&flags),
            &ObservableReport::from_state(&state, &numeric),
        ),
        Err(e) => Observable::ALL
            .iter()
            .map(|o| b.failure(o.name(), failure_flag(&e)))
            .collect(),
    }
}

/// Entrywise `|evolve(|J,g>, t) - |J, g + beta t>|` and `| ||evolved||^2 - 1 |`.
fn stability(
    params: &ModelParams64,
    j: f64,
    gamma: f64,
    t: f64,
    opts: &StateOptions64,
) -> Result<(f64, f64), &'static str> {
    let (state, _) = prepare(params, j, gamma, opts)?;
    let evolved = evolve(&state, t);
    let (direct, _) = prepare(params, j, gamma + params.beta() * t, opts)?;
    let gap = evolved
        .coefficients()
        .max_abs_diff(direct.coefficients())
        .map_err(|e| failure_flag(&e))?;
    Ok((gap, (evolved.coefficients().norm_sqr() - 1.0).abs()))
}

fn stability_rows(
    b: &RowBuilder,
    params: &ModelParams64,
    j: f64,
    gamma: f64,
    t: f64,
    opts: &StateOptions64,
) -> Vec<Row> {
    let b = b.clone().at(Some(j), Some(gamma), Some(t));
    match stability(params, j, gamma, t, opts) {
        Ok((gap, norm)) => {
            let flag = |v: f64| -> &'static [&'static str] {
                if v > INVARIANT_TOLERANCE {
                    &[INVARIANT_VIOLATION]
                } else {
                    &[]
                }
            };
            vec![
                b.row_with("temporal_stability", Some(0.0), Some(gap), flag(gap)),
                b.row_with("unitarity", Some(0.0), Some(norm), flag(norm)),
            ]
        }
        Err(flag) => vec![b.failure("temporal_stability", flag)],
    }
}

fn verify_rows(cfg: &RunConfig, params: &[ModelParams64]) -> Vec<Row> {
    let opts = options(cfg);
    let mut rows = par_rows(grid_product(params, &cfg.j, &cfg.gamma), |(p, j, g)| {
        observable_rows(cfg, &p, j, g)
    });
    // draws are taken sequentially so the sample does not depend on scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut draws = Vec::new();
    for p in params {
        for _ in 0..STABILITY_DRAWS {
            let j = rng.gen_range(0.05..0.25);
            let gamma = rng.gen_range(0.0..2.0 * PI);
            let t = rng.gen_range(-10.0..10.0);
            draws.push((*p, j, gamma, t));
        }
    }
    rows.extend(
        draws
            .par_iter()
            .map(|&(p, j, g, t)| {
                stability_rows(&RowBuilder::new(cfg.command, &p), &p, j, g, t, &opts)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten(),
    );
    rows
}

fn evolve_rows(cfg: &RunConfig, params: &[ModelParams64]) -> Vec<Row> {
    let opts = options(cfg);
    let times = cfg.t.unwrap_or(Grid::single(0.0)).points();
    let points: Vec<(ModelParams64, f64, f64, f64)> = grid_product(params, &cfg.j, &cfg.gamma)
        .into_iter()
        .flat_map(|(p, j, g)| times.iter().map(move |&t| (p, j, g, t)))
        .collect();
    par_rows(points, |(p, j, g, t)| {
        let b = RowBuilder::new(cfg.command, &p).at(Some(j), Some(g), Some(t));
        let (state, flags) = match prepare(&p, j, g, &opts) {
            Ok(v) => v,
            Err(flag) => return vec![b.failure("x", flag)],
        };
        let evolved = evolve(&state, t);
        let shifted = g + p.beta() * t;
        let b = b.flagged(&flags);
        let mut rows = match numeric_observables(&evolved) {
            Ok(o) => vec![
                b.row(
                    "x",
                    Some(analytic::expect_x(&p, j, shifted)),
                    Some(o.mean_x),
                ),
                b.row(
                    "p",
                    Some(analytic::expect_p(&p, j, shifted)),
                    Some(o.mean_p),
                ),
            ],
            Err(e) => vec![b.failure("x", failure_flag(&e))],
        };
        rows.extend(stability_rows(&b, &p, j, g, t, &opts));
        rows
    })
}

fn revival_rows(cfg: &RunConfig, params: &ModelParams64) -> Vec<Row> {
    let opts = options(cfg);
    let scales = timescales(params);
    let period = scales.revival.unwrap_or(scales.classical);
    let times: Vec<f64> = match cfg.t {
        Some(g) => g.points(),
        None => (0..=REVIVAL_POINTS)
            .map(|k| k as f64 * period / REVIVAL_POINTS as f64)
            .collect(),
    };
    let mut extra: Vec<String> = Vec::new();
    if scales.commensurate {
        extra.push("commensurate".into());
    }
    if scales.reciprocal_condition {
        extra.push("reciprocal_condition".into());
    }
    let harmonic = params.lambda() == 0.0 && cfg.n_start.index() == 0;
    let mut rows = Vec::new();
    for j in cfg.j.points() {
        let b = RowBuilder::new(cfg.command, params)
            .at(Some(j), None, None)
            .flagged(&extra);
        let (state, flags) = match prepare(params, j, 0.0, &opts) {
            Ok(v) => v,
            Err(flag) => {
                rows.push(b.failure("autocorrelation", flag));
                continue;
            }
        };
        let b = b.flagged(&flags);
        rows.push(b.row("classical_period", Some(scales.classical), None));
        if let Some(tr) = scales.revival {
            rows.push(b.row("revival_time", Some(tr), None));
        }
        rows.extend(
            times
                .par_iter()
                .map(|&t| {
                    // canonical coherent state: exp(-2J(1 - cos(beta t)))
                    let closed =
                        harmonic.then(|| (-2.0 * j * (1.0 - (params.beta() * t).cos())).exp());
                    b.clone().at(Some(j), None, Some(t)).row(
                        "autocorrelation",
                        closed,
                        Some(state_autocorrelation(&state, t)),
                    )
                })
                .collect::<Vec<_>>(),
        );
    }
    rows
}

fn mandel_rows(cfg: &RunConfig, params: &ModelParams64) -> Vec<Row> {
    let opts = options(cfg);
    let js = cfg.j.points();
    let mut rows: Vec<Row> = js
        .par_iter()
        .map(|&j| {
            let b = RowBuilder::new(cfg.command, params).at(Some(j), None, None);
            let printed = Some(analytic::mandel_q(params, j));
            match prepare(params, j, 0.0, &opts) {
                Ok((state, flags)) => {
                    let q = numeric_observables(&state).ok().and_then(|o| o.mandel_q);
                    b.flagged(&flags).row("mandel_q", printed, q)
                }
                Err(flag) => b.row_with("mandel_q", printed, None, &[flag]),
            }
        })
        .collect();
    let b = RowBuilder::new(cfg.command, params);
    let roots = mandel_roots::<f64>();
    rows.push(b.row("mandel_root_printed", Some(roots.printed), None));
    rows.push(b.row("mandel_root_variance_line", Some(roots.variance_line), None));
    rows.push(b.row("mandel_root_moments", Some(roots.moments), None));

    let positive: Vec<f64> = js.iter().copied().filter(|&j| j > 0.0).collect();
    let tail_flagged = rows.iter().any(|r| r.has_flag("tail_beyond_guard"));
    let scan_opts = StateOptions64 {
        tail_guard: if tail_flagged {
            f64::INFINITY
        } else {
            opts.tail_guard
        },
        ..opts
    };
    let mut scan_flags: Vec<&str> = Vec::new();
    if tail_flagged {
        scan_flags.push("tail_beyond_guard");
    }
    let numeric_root = if positive.len() < 2 {
        scan_flags.push("grid_too_short");
        None
    } else {
        match mandel_scan(params, &positive, MANDEL_TOLERANCE, &scan_opts) {
            Ok(scan) => match scan.verdict {
                MandelVerdict::NoSignChange { positive } => {
                    scan_flags.push(if positive {
                        "no_sign_change_positive"
                    } else {
                        "no_sign_change_negative"
                    });
                    None
                }
                MandelVerdict::Root { j, nearer } => {
                    scan_flags.push(match nearer {
                        MandelRoute::Printed => "nearer_printed",
                        MandelRoute::VarianceLine => "nearer_variance_line",
                    });
                    Some(j)
                }
                MandelVerdict::Multiple { .. } => {
                    scan_flags.push("multiple_sign_changes");
                    None
                }
            },
            Err(e) => {
                scan_flags.push(failure_flag(&e));
                None
            }
        }
    };
    rows.push(b.row_with("mandel_root_numeric", None, numeric_root, &scan_flags));
    rows
}

fn eom_rows(cfg: &RunConfig, params: &ModelParams64, j: f64, gamma: f64) -> Vec<Row> {
    let b = RowBuilder::new(cfg.command, params).at(Some(j), Some(gamma), None);
    let r = match eom_comparison(params, j, gamma, &options(cfg)) {
        Ok(r) => r,
        Err(e) => return vec![b.failure("xddot_heisenberg", failure_flag(&e))],
    };
    let b = if r.oracle.consistent() {
        b
    } else {
        b.flagged(&["fd_inconsistent".to_string()])
    };
    let oracle = Some(r.oracle.extrapolated);
    let naive = -params.beta().powi(2) * analytic::expect_x(params, j, gamma);
    vec![
        b.row("xddot_heisenberg", Some(r.heisenberg), oracle),
        b.row("xddot_classical", Some(r.classical), oracle),
        b.row("xddot_minus_beta_sq_x", Some(naive), oracle),
        b.row("xddot_printed_gap", Some(r.printed_gap), None),
        b.row(
            "xddot_first_order_heisenberg",
            Some(r.heisenberg_first_order),
            r.oracle_first_order,
        ),
        b.row(
            "xddot_first_order_classical",
            Some(r.classical_first_order),
            r.oracle_first_order,
        ),
    ]
}
