//! Time evolution, revivals and the second time derivative of `<x>`.

use num_complex::Complex;

use crate::algebra::phase_space_ops;
use crate::error::Result;
use crate::fock::{expectation, FockMatrix};
use crate::gcs::{build_state, GKState, StateOptions};
use crate::scalar::Real;
use crate::spectrum::ModelParams;

/// Evolves under the diagonal spectrum: coefficient `n` picks up `exp(-i E_n t)`, which
/// relabels the state as `|J, gamma + beta t>`.
pub fn evolve<T: Real>(state: &GKState<T>, t: T) -> GKState<T> {
    let params = state.params();
    let mut coefficients = state.coefficients().clone();
    for (n, c) in coefficients.amplitudes_mut().iter_mut().enumerate() {
        *c *= Complex::from_polar(T::one(), -params.beta() * params.level(n) * t);
    }
    state.with_phases(state.gamma() + params.beta() * t, coefficients)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales<T> {
    /// `T_c = 2 pi / beta`.
    pub classical: T,
    /// `T_r = 4 pi / lambda`; `None` for the linear spectrum.
    pub revival: Option<T>,
    /// `2 beta / lambda` is an integer, so every phase `beta T_r e_n` is a multiple of `2 pi`.
    pub commensurate: bool,
    /// The literally stated condition, `lambda / (2 beta)` an integer.
    pub reciprocal_condition: bool,
}

pub fn timescales<T: Real>(params: &ModelParams<T>) -> Timescales<T> {
    let two_pi = T::TAU();
    let beta = params.beta();
    let lambda = params.lambda();
    let is_integer = |r: T| (r - r.round()).abs() <= T::tol(1e-9) * r.abs().max(T::one());
    let linear = lambda == T::zero();
    Timescales {
        classical: two_pi / beta,
        revival: (!linear).then(|| T::lit(2.0) * two_pi / lambda),
        commensurate: !linear && is_integer(T::lit(2.0) * beta / lambda),
        reciprocal_condition: !linear && is_integer(lambda / (T::lit(2.0) * beta)),
    }
}

/// `|<psi|U(t)|psi>|^2 = |sum_n p_n exp(-i E_n t)|^2` for a prepared state.
pub fn state_autocorrelation<T: Real>(state: &GKState<T>, t: T) -> T {
    let params = state.params();
    let amp = state
        .probabilities()
        .iter()
        .enumerate()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (n, &p)| {
            acc + Complex::from_polar(p, -params.beta() * params.level(n) * t)
        });
    amp.norm_sqr()
}

/// Return probability of `|J, gamma>` after time `t`; independent of `gamma`.
pub fn autocorrelation<T: Real>(
    params: &ModelParams<T>,
    j: T,
    t: T,
    options: &StateOptions<T>,
) -> Result<T> {
    let state = build_state(params, j, T::zero(), options)?;
    Ok(state_autocorrelation(&state, t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevivalProfile<T> {
    pub params: ModelParams<T>,
    pub j: T,
    pub times: Vec<T>,
    pub autocorrelation: Vec<T>,
    pub timescales: Timescales<T>,
}

impl<T: Real> RevivalProfile<T> {
    pub fn minimum(&self) -> Option<(T, T)> {
        self.times
            .iter()
            .zip(&self.autocorrelation)
            .map(|(&t, &a)| (t, a))
            .fold(None, |best, (t, a)| match best {
                Some((_, b)) if b <= a => best,
                _ => Some((t, a)),
            })
    }
}

pub fn revival_profile<T: Real>(
    params: &ModelParams<T>,
    j: T,
    times: &[T],
    options: &StateOptions<T>,
) -> Result<RevivalProfile<T>> {
    let state = build_state(params, j, T::zero(), options)?;
    Ok(RevivalProfile {
        params: *params,
        j,
        times: times.to_vec(),
        autocorrelation: times
            .iter()
            .map(|&t| state_autocorrelation(&state, t))
            .collect(),
        timescales: timescales(params),
    })
}

/// Heisenberg-picture result `<x''> = sqrt(2 J beta)[-beta + lambda'(-1 + 2J + (1+J) beta/2)] cos(gamma)`.
pub fn heisenberg_xddot<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let beta = params.beta();
    let bracket = -beta
        + params.lambda_prime()
            * (-T::one() + T::lit(2.0) * j + (T::one() + j) * beta / T::lit(2.0));
    (T::lit(2.0) * j * beta).sqrt() * bracket * gamma.cos()
}

/// Ordered classical law `<x''> = sqrt(2 J beta)[-beta + lambda'(-1 + (4 + beta/2)(1+J))] cos(gamma)`.
pub fn classical_xddot<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let beta = params.beta();
    let bracket = -beta
        + params.lambda_prime() * (-T::one() + (T::lit(4.0) + beta / T::lit(2.0)) * (T::one() + j));
    (T::lit(2.0) * j * beta).sqrt() * bracket * gamma.cos()
}

/// Second derivative of `<x>(t)` at `t = 0` by central differences at steps `h` and `h/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifference<T> {
    pub step: T,
    pub coarse: T,
    pub fine: T,
    /// Richardson combination `(4 fine - coarse)/3`.
    pub extrapolated: T,
}

impl<T: Real> FiniteDifference<T> {
    /// The two raw estimates differ by about the expected `3/4` of the coarse error.
    pub fn consistent(&self) -> bool {
        let scale = self.extrapolated.abs().max(T::one());
        (self.coarse - self.fine).abs() <= T::lit(1e-2) * scale
            && (self.fine - self.extrapolated).abs()
                <= (self.coarse - self.extrapolated).abs() + T::tol(1e-12) * scale
    }
}

/// Relative step used for the `<x>` finite differences, in units of `1/beta`.
pub const FD_STEP: f64 = 0.02;

pub fn numeric_xddot<T: Real>(state: &GKState<T>) -> Result<FiniteDifference<T>> {
    let params = state.params();
    let (x, _) = phase_space_ops(params);
    let xm: FockMatrix<T> = x.to_matrix(state.dim());
    let mean_x = |t: T| -> Result<T> { Ok(expectation(evolve(state, t).coefficients(), &xm)?.re) };
    let h = T::lit(FD_STEP) / params.beta();
    let f0 = mean_x(T::zero())?;
    let second =
        |h: T| -> Result<T> { Ok((mean_x(h)? - T::lit(2.0) * f0 + mean_x(-h)?) / (h * h)) };
    let coarse = second(h)?;
    let fine = second(h / T::lit(2.0))?;
    Ok(FiniteDifference {
        step: h,
        coarse,
        fine,
        extrapolated: (T::lit(4.0) * fine - coarse) / T::lit(3.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomReport<T> {
    pub heisenberg: T,
    pub classical: T,
    pub oracle: FiniteDifference<T>,
    /// `|heisenberg - classical|`.
    pub printed_gap: T,
    /// Oracle value of the same state at `lambda = 0`.
    pub harmonic_oracle: T,
    /// `(oracle - harmonic_oracle)/lambda'`; `None` at `lambda' = 0`.
    pub oracle_first_order: Option<T>,
    pub heisenberg_first_order: T,
    pub classical_first_order: T,
}

pub fn eom_comparison<T: Real>(
    params: &ModelParams<T>,
    j: T,
    gamma: T,
    options: &StateOptions<T>,
) -> Result<EomReport<T>> {
    let heisenberg = heisenberg_xddot(params, j, gamma);
    let classical = classical_xddot(params, j, gamma);
    let oracle = numeric_xddot(&build_state(params, j, gamma, options)?)?;
    let harmonic = params.harmonic();
    let harmonic_oracle = if params.lambda() == T::zero() {
        oracle.extrapolated
    } else {
        numeric_xddot(&build_state(&harmonic, j, gamma, options)?)?.extrapolated
    };
    let lp = params.lambda_prime();
    let scale = (T::lit(2.0) * j * params.beta()).sqrt() * gamma.cos();
    let beta = params.beta();
    Ok(EomReport {
        heisenberg,
        classical,
        oracle,
        printed_gap: (heisenberg - classical).abs(),
        harmonic_oracle,
        oracle_first_order: (lp != T::zero()).then(|| (oracle.extrapolated - harmonic_oracle) / lp),
        heisenberg_first_order: scale
            * (-T::one() + T::lit(2.0) * j + (T::one() + j) * beta / T::lit(2.0)),
        classical_first_order: scale
            * (-T::one() + (T::lit(4.0) + beta / T::lit(2.0)) * (T::one() + j)),
    })
}
