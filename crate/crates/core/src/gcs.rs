//! Gazeau-Klauder states `|J, gamma>` on a truncated number basis.
//!
//! Coefficients are `J^{n/2} exp(-i gamma e_n) / sqrt(rho_n)`, normalized numerically. For
//! `lambda > 0` the series stops at the last index where `e_n` still increases; the mass that
//! would have followed is reported as `tail_mass`.

use num_complex::Complex;

use crate::algebra::{hamiltonian_fock, phase_space_ops};
use crate::error::{Error, Result};
use crate::fock::{expectation, variance, FockMatrix, FockVector, EDGE_ROWS};
use crate::scalar::Real;
use crate::spectrum::ModelParams;

pub const DEFAULT_DIM_GUARD: f64 = 1e-10;
pub const MIN_DIM: usize = 16;
pub const MAX_DIM: usize = 512;
/// Relative size of the last summed term when the normalization series is cut off.
pub const SERIES_TOLERANCE: f64 = 1e-14;
const MAX_TERMS: usize = 100_000;

/// First index of the coherent-state series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesStart {
    /// `n >= 0`, vacuum included (`rho_0 = 1`).
    #[default]
    Vacuum,
    /// `n >= 1`.
    FirstExcited,
}

impl SeriesStart {
    pub fn index(self) -> usize {
        match self {
            SeriesStart::Vacuum => 0,
            SeriesStart::FirstExcited => 1,
        }
    }

    pub fn from_index(n: usize) -> Option<Self> {
        match n {
            0 => Some(SeriesStart::Vacuum),
            1 => Some(SeriesStart::FirstExcited),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateOptions<T> {
    pub n_start: SeriesStart,
    /// Largest probability mass allowed in the top edge rows.
    pub dim_guard: T,
    /// Largest series tail that the `lambda > 0` cutoff may discard. Infinity accepts any
    /// tail and leaves the judgement to [`GKState::tail_mass`].
    pub tail_guard: T,
    pub max_dim: usize,
}

impl<T: Real> Default for StateOptions<T> {
    fn default() -> Self {
        Self {
            n_start: SeriesStart::Vacuum,
            dim_guard: T::lit(DEFAULT_DIM_GUARD),
            tail_guard: T::lit(DEFAULT_DIM_GUARD),
            max_dim: MAX_DIM,
        }
    }
}

impl<T: Real> StateOptions<T> {
    pub fn with_start(n_start: SeriesStart) -> Self {
        Self {
            n_start,
            ..Self::default()
        }
    }
}

fn check_action<T: Real>(j: T) -> Result<()> {
    if !j.is_finite() || j < T::zero() {
        return Err(Error::InvalidAction(j.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `ln(J^n / rho_n)` for consecutive `n`, starting at `n_start`.
struct LogWeights<'a, T> {
    params: &'a ModelParams<T>,
    log_j: T,
    n: usize,
    current: T,
}

impl<'a, T: Real> LogWeights<'a, T> {
    fn new(params: &'a ModelParams<T>, j: T, n_start: usize) -> Self {
        let log_j = j.ln();
        // ln(J^1/rho_1) when starting at one
        let current = if n_start == 0 {
            T::zero()
        } else {
            log_j - params.level(1).ln()
        };
        Self {
            params,
            log_j,
            n: n_start,
            current,
        }
    }
}

impl<T: Real> Iterator for LogWeights<'_, T> {
    type Item = (usize, T);

    fn next(&mut self) -> Option<(usize, T)> {
        let item = (self.n, self.current);
        let e = self.params.level(self.n + 1);
        self.n += 1;
        self.current = if e > T::zero() {
            self.current + self.log_j - e.ln()
        } else {
            T::neg_infinity()
        };
        Some(item)
    }
}

/// Log-weights `ln(J^n/rho_n)` of the kept series terms.
struct Series<T> {
    log_weights: Vec<T>,
    n_start: usize,
    /// Weight beyond the kept range, relative to the kept total.
    discarded: T,
}

fn series<T: Real>(params: &ModelParams<T>, j: T, n_start: SeriesStart) -> Result<Series<T>> {
    check_action(j)?;
    let start = n_start.index();
    if j == T::zero() {
        if start == 1 {
            return Err(Error::EmptySeries);
        }
        return Ok(Series {
            log_weights: vec![T::zero()],
            n_start: 0,
            discarded: T::zero(),
        });
    }
    let mut log_weights = Vec::new();
    let mut discarded = T::zero();
    match params.series_cutoff() {
        Some(cutoff) => {
            if cutoff < start {
                return Err(Error::EmptySeries);
            }
            let mut kept_max = T::neg_infinity();
            let mut tail = Vec::new();
            for (n, lw) in LogWeights::new(params, j, start) {
                if lw == T::neg_infinity() || n > MAX_TERMS {
                    break;
                }
                if n <= cutoff {
                    kept_max = kept_max.max(lw);
                    log_weights.push(lw);
                } else {
                    tail.push(lw);
                }
            }
            let kept: T = log_weights
                .iter()
                .fold(T::zero(), |acc, &lw| acc + (lw - kept_max).exp());
            let lost: T = tail
                .iter()
                .fold(T::zero(), |acc, &lw| acc + (lw - kept_max).exp());
            discarded = lost / (kept + lost);
        }
        None => {
            let mut max = T::neg_infinity();
            for (n, lw) in LogWeights::new(params, j, start) {
                if n > MAX_TERMS {
                    return Err(Error::Divergent {
                        max_terms: MAX_TERMS,
                    });
                }
                max = max.max(lw);
                log_weights.push(lw);
                // terms shrink geometrically once e_{n+1} > 2J
                let ratio_small = params.level(n + 1) > T::lit(2.0) * j;
                if ratio_small && lw - max < T::lit(SERIES_TOLERANCE).ln() + T::lit(-20.0) {
                    break;
                }
            }
        }
    }
    Ok(Series {
        log_weights,
        n_start: start,
        discarded,
    })
}

/// `N^2(J) = sum_{n >= n_start} J^n / rho_n`.
pub fn normalization_sq<T: Real>(params: &ModelParams<T>, j: T, n_start: SeriesStart) -> Result<T> {
    check_action(j)?;
    if j == T::zero() {
        return match n_start {
            SeriesStart::Vacuum => Ok(T::one()),
            SeriesStart::FirstExcited => Err(Error::EmptySeries),
        };
    }
    let start = n_start.index();
    let last = params.series_cutoff();
    let mut term = T::one();
    for k in 1..=start {
        term = term * j / params.level(k);
    }
    let mut sum = T::zero();
    let mut n = start;
    loop {
        sum += term;
        if Some(n) == last {
            return Ok(sum);
        }
        let e = params.level(n + 1);
        let next = term * j / e;
        // geometric bound on the remaining tail once the ratio is below one half
        if e > T::lit(2.0) * j && next <= T::lit(SERIES_TOLERANCE) * sum {
            return Ok(sum + next);
        }
        term = next;
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::Divergent {
                max_terms: MAX_TERMS,
            });
        }
    }
}

/// A normalized Gazeau-Klauder state on `dim` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct GKState<T> {
    params: ModelParams<T>,
    j: T,
    gamma: T,
    n_start: SeriesStart,
    coefficients: FockVector<T>,
    /// Series probabilities `|c_n|^2` on the kept basis.
    probabilities: Vec<T>,
    tail_mass: T,
}

impl<T: Real> GKState<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn j(&self) -> T {
        self.j
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn n_start(&self) -> SeriesStart {
        self.n_start
    }

    pub fn dim(&self) -> usize {
        self.coefficients.dim()
    }

    pub fn coefficients(&self) -> &FockVector<T> {
        &self.coefficients
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// Probability mass of the ideal series not represented in this state.
    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    /// Same state with coefficient phases re-labelled to a new `gamma`.
    pub(crate) fn with_phases(&self, gamma: T, coefficients: FockVector<T>) -> Self {
        Self {
            gamma,
            coefficients,
            ..self.clone()
        }
    }
}

/// Builds `|J, gamma>`, choosing the smallest power-of-two dimension (at least [`MIN_DIM`])
/// that keeps the mass in the top [`EDGE_ROWS`] rows and beyond below `dim_guard`.
pub fn build_state<T: Real>(
    params: &ModelParams<T>,
    j: T,
    gamma: T,
    options: &StateOptions<T>,
) -> Result<GKState<T>> {
    let s = series(params, j, options.n_start)?;
    if s.discarded.is_nan() || s.discarded > options.tail_guard {
        return Err(Error::TailBeyondCutoff {
            tail: s.discarded.to_f64().unwrap_or(f64::NAN),
            guard: options.tail_guard.to_f64().unwrap_or(f64::NAN),
        });
    }
    let guard = options.dim_guard;
    let max = s
        .log_weights
        .iter()
        .fold(T::neg_infinity(), |m, &w| m.max(w));
    let weights: Vec<T> = s.log_weights.iter().map(|&lw| (lw - max).exp()).collect();
    let total: T = weights.iter().fold(T::zero(), |a, &w| a + w);

    let mass_from = |from: usize| -> T {
        weights
            .iter()
            .enumerate()
            .filter(|(k, _)| s.n_start + k >= from)
            .fold(T::zero(), |a, (_, &w)| a + w)
            / total
    };

    let mut dim = MIN_DIM;
    loop {
        let edge = mass_from(dim.saturating_sub(EDGE_ROWS));
        if edge < guard {
            break;
        }
        if dim >= options.max_dim {
            return Err(Error::DimensionExhausted {
                max_dim: options.max_dim,
                guard: guard.to_f64().unwrap_or(f64::NAN),
            });
        }
        dim = (dim * 2).min(options.max_dim);
    }

    let beyond = mass_from(dim);
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
    for (k, &w) in weights.iter().enumerate() {
        let n = s.n_start + k;
        if n >= dim {
            break;
        }
        let phase = -gamma * params.level(n);
        amplitudes[n] = Complex::from_polar((w / total).sqrt(), phase);
    }
    let coefficients = FockVector::new(amplitudes).normalized();
    let probabilities = coefficients
        .amplitudes()
        .iter()
        .map(|c| c.norm_sqr())
        .collect();
    Ok(GKState {
        params: *params,
        j,
        gamma,
        n_start: options.n_start,
        coefficients,
        probabilities,
        tail_mass: s.discarded + beyond,
    })
}

/// Operator matrices for numeric observables at one `(params, dim)`.
#[derive(Debug, Clone)]
pub struct ObservableOperators<T> {
    pub dim: usize,
    pub lower: FockMatrix<T>,
    pub position: FockMatrix<T>,
    pub momentum: FockMatrix<T>,
    pub number: FockMatrix<T>,
    pub hamiltonian: FockMatrix<T>,
}

impl<T: Real> ObservableOperators<T> {
    pub fn new(params: &ModelParams<T>, dim: usize) -> Self {
        let (x, p) = phase_space_ops(params);
        Self {
            dim,
            lower: FockMatrix::lower(dim),
            position: x.to_matrix(dim),
            momentum: p.to_matrix(dim),
            number: FockMatrix::number(dim),
            hamiltonian: hamiltonian_fock(params).to_matrix(dim),
        }
    }
}

/// Brute-force observables of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericObservables<T> {
    pub mean_a: Complex<T>,
    pub mean_x: T,
    pub mean_p: T,
    pub var_x: T,
    pub var_p: T,
    pub uncertainty_product: T,
    pub energy: T,
    pub mean_n: T,
    pub mean_n_sq: T,
    pub var_n: T,
    /// `(dN)^2/<N> - 1`; undefined for the vacuum.
    pub mandel_q: Option<T>,
}

pub fn numeric_observables<T: Real>(state: &GKState<T>) -> Result<NumericObservables<T>> {
    let ops = ObservableOperators::new(state.params(), state.dim());
    numeric_observables_with(state, &ops)
}

pub fn numeric_observables_with<T: Real>(
    state: &GKState<T>,
    ops: &ObservableOperators<T>,
) -> Result<NumericObservables<T>> {
    let psi = state.coefficients();
    let mean_a = expectation(psi, &ops.lower)?;
    let mean_x = expectation(psi, &ops.position)?.re;
    let mean_p = expectation(psi, &ops.momentum)?.re;
    let var_x = variance(psi, &ops.position)?;
    let var_p = variance(psi, &ops.momentum)?;
    let energy = expectation(psi, &ops.hamiltonian)?.re;
    let mean_n = expectation(psi, &ops.number)?.re;
    let var_n = variance(psi, &ops.number)?;
    let mean_n_sq = ops.number.apply(psi)?.norm_sqr();
    let mandel_q = if mean_n > T::zero() {
        Some(var_n / mean_n - T::one())
    } else {
        None
    };
    Ok(NumericObservables {
        mean_a,
        mean_x,
        mean_p,
        var_x,
        var_p,
        uncertainty_product: var_x * var_p,
        energy,
        mean_n,
        mean_n_sq,
        var_n,
        mandel_q,
    })
}
