//! Closed-form first-order expressions for coherent-state observables, written exactly as
//! published. Where published lines disagree with each other the alternatives are exposed
//! side by side; the truncated-basis numerics in [`crate::gcs`] decide between them.

use num_complex::Complex;

use crate::scalar::Real;
use crate::spectrum::ModelParams;

/// `|lambda' J gamma|` above which the secular `gamma sin(2 gamma)` terms are untrustworthy.
pub const SECULAR_WINDOW: f64 = 0.1;

fn half<T: Real>() -> T {
    T::lit(0.5)
}

/// Common amplitude factor `1 - (lambda'/2)(1 + J)`.
fn amplitude<T: Real>(params: &ModelParams<T>, j: T) -> T {
    T::one() - params.lambda_prime() * half::<T>() * (T::one() + j)
}

/// `<a> = sqrt(J) e^{i gamma} (1 - (lambda'/2)(1 + J))`.
pub fn expect_a<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> Complex<T> {
    Complex::from_polar(j.sqrt() * amplitude(params, j), gamma)
}

pub fn expect_a_dagger<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> Complex<T> {
    expect_a(params, j, gamma).conj()
}

/// `<x> = sqrt(2J/beta) (1 - (lambda'/2)(1 + J)) cos(gamma)`.
pub fn expect_x<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    (T::lit(2.0) * j / params.beta()).sqrt() * amplitude(params, j) * gamma.cos()
}

/// `<p> = sqrt(2 J beta) (1 - (lambda'/2)(1 + J)) sin(gamma)`.
pub fn expect_p<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    (T::lit(2.0) * j * params.beta()).sqrt() * amplitude(params, j) * gamma.sin()
}

/// Oscillating part shared by both dispersions:
/// `(7/4 + 3J/2) cos(2 gamma) + 2(1 + J) gamma sin(2 gamma)`.
fn dispersion_oscillation<T: Real>(j: T, gamma: T) -> T {
    let two_g = T::lit(2.0) * gamma;
    (T::lit(1.75) + T::lit(1.5) * j) * two_g.cos()
        + T::lit(2.0) * (T::one() + j) * gamma * two_g.sin()
}

/// `(Delta x)^2 = (1/beta)[1/2 + lambda' J (3/2 (1+J) + osc)]`.
pub fn variance_x<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let steady = T::lit(1.5) * (T::one() + j);
    (half::<T>() + params.lambda_prime() * j * (steady + dispersion_oscillation(j, gamma)))
        / params.beta()
}

/// `(Delta p)^2 = beta [1/2 + lambda' J (3/2 (1+J) - osc)]`.
pub fn variance_p<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let steady = T::lit(1.5) * (T::one() + j);
    params.beta()
        * (half::<T>() + params.lambda_prime() * j * (steady - dispersion_oscillation(j, gamma)))
}

/// `(Delta x)^2 (Delta p)^2 = 1/4 + (3/2) lambda' J (1 + J)`, independent of `gamma`.
pub fn uncertainty_product<T: Real>(params: &ModelParams<T>, j: T) -> T {
    T::lit(0.25) + T::lit(1.5) * params.lambda_prime() * j * (T::one() + j)
}

/// Plain product of the two printed dispersions, all orders kept.
pub fn variance_product<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    variance_x(params, j, gamma) * variance_p(params, j, gamma)
}

/// Product of the printed dispersions expanded to first order:
/// `(1/2 + u)(1/2 + v) ~ 1/4 + (u + v)/2`.
pub fn variance_product_first_order<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let u = variance_x(params, j, gamma) * params.beta() - half::<T>();
    let v = variance_p(params, j, gamma) / params.beta() - half::<T>();
    T::lit(0.25) + (u + v) * half::<T>()
}

/// Dispersions at the turning points `gamma = 0` and `gamma = pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingExtrema<T> {
    pub var_x_at_zero: T,
    pub var_p_at_zero: T,
    pub var_x_at_half_pi: T,
    pub var_p_at_half_pi: T,
    /// The separately printed `gamma = 0` values, kept for comparison:
    /// `(1/beta)[1/2 + lambda' J (13/2 + 3J)]` and `beta [1/2 - lambda' J / 4]`.
    pub printed_var_x_at_zero: T,
    pub printed_var_p_at_zero: T,
}

impl<T: Real> SqueezingExtrema<T> {
    /// Disagreement between the printed `gamma = 0` position dispersion and the general formula.
    pub fn var_x_inconsistency(&self) -> T {
        (self.printed_var_x_at_zero - self.var_x_at_zero).abs()
    }

    pub fn var_p_inconsistency(&self) -> T {
        (self.printed_var_p_at_zero - self.var_p_at_zero).abs()
    }
}

pub fn squeezing_extrema<T: Real>(params: &ModelParams<T>, j: T) -> SqueezingExtrema<T> {
    let hp = T::FRAC_PI_2();
    let lp = params.lambda_prime();
    let beta = params.beta();
    SqueezingExtrema {
        var_x_at_zero: variance_x(params, j, T::zero()),
        var_p_at_zero: variance_p(params, j, T::zero()),
        var_x_at_half_pi: variance_x(params, j, hp),
        var_p_at_half_pi: variance_p(params, j, hp),
        printed_var_x_at_zero: (half::<T>() + lp * j * (T::lit(6.5) + T::lit(3.0) * j)) / beta,
        printed_var_p_at_zero: beta * (half::<T>() - T::lit(0.25) * lp * j),
    }
}

/// `<H> = (beta/2)(1 + 2J) + lambda' [ (beta/2) J (1+J) + J^2/4 - (1/4)(1 + J + 2J cos 2gamma)^2 ]`.
pub fn energy_expect<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> T {
    let beta = params.beta();
    let osc = T::one() + j + T::lit(2.0) * j * (T::lit(2.0) * gamma).cos();
    half::<T>() * beta * (T::one() + T::lit(2.0) * j)
        + params.lambda_prime()
            * (half::<T>() * beta * j * (T::one() + j) + j * j / T::lit(4.0)
                - osc * osc / T::lit(4.0))
}

/// Time scale beyond which the `cos(2 gamma)` part of `<H>` averages out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingTimescale<T> {
    /// `1/beta`.
    pub inverse_beta: T,
    /// Printed estimate `alpha^{-1} (1 + (lambda'/2) alpha^{-1})`.
    pub alpha_estimate: T,
}

pub fn averaging_timescale<T: Real>(params: &ModelParams<T>) -> AveragingTimescale<T> {
    let inv_alpha = T::one() / params.alpha();
    AveragingTimescale {
        inverse_beta: T::one() / params.beta(),
        alpha_estimate: inv_alpha * (T::one() + params.lambda_prime() * half::<T>() * inv_alpha),
    }
}

/// Printed approximate root `beta ~ (lambda + 2 alpha)/2` (positive branch).
pub fn beta_from_alpha_printed<T: Real>(alpha: T, lambda: T) -> T {
    (lambda + T::lit(2.0) * alpha) * half::<T>()
}

/// Positive root of `beta^2 + beta lambda - alpha^2 = 0`.
pub fn beta_from_alpha_exact<T: Real>(alpha: T, lambda: T) -> T {
    (-lambda + (lambda * lambda + T::lit(4.0) * alpha * alpha).sqrt()) * half::<T>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberMoments<T> {
    pub mean: T,
    pub mean_sq: T,
    /// The separately printed `(Delta n)^2` line (not `mean_sq - mean^2`).
    pub variance: T,
}

/// `<N> = J[1 + (lambda'/2)(1+J)]`, `<N^2> = J[1 + J + lambda'(1/2 + 1 + J^2)]`,
/// `(Delta n)^2 = J + 2 lambda' J (1+J)(-1/2 + J + J^2)`.
pub fn number_moments<T: Real>(params: &ModelParams<T>, j: T) -> NumberMoments<T> {
    let lp = params.lambda_prime();
    NumberMoments {
        mean: j * (T::one() + lp * half::<T>() * (T::one() + j)),
        mean_sq: j * (T::one() + j + lp * (T::lit(1.5) + j * j)),
        variance: j + T::lit(2.0) * lp * j * (T::one() + j) * (-half::<T>() + j + j * j),
    }
}

/// `Q = (lambda'/2)(1 + J)(4J^2 + 3J - 3)`.
pub fn mandel_q<T: Real>(params: &ModelParams<T>, j: T) -> T {
    params.lambda_prime()
        * half::<T>()
        * (T::one() + j)
        * (T::lit(4.0) * j * j + T::lit(3.0) * j - T::lit(3.0))
}

/// `Q = (Delta n)^2/<N> - 1` evaluated from the printed `<N>` and `<N^2>`.
/// `None` at `J = 0`.
pub fn mandel_q_from_moments<T: Real>(params: &ModelParams<T>, j: T) -> Option<T> {
    let m = number_moments(params, j);
    (m.mean > T::zero()).then(|| (m.mean_sq - m.mean * m.mean) / m.mean - T::one())
}

/// `Q = (Delta n)^2/<N> - 1` evaluated from the printed `(Delta n)^2` line and `<N>`.
pub fn mandel_q_from_variance_line<T: Real>(params: &ModelParams<T>, j: T) -> Option<T> {
    let m = number_moments(params, j);
    (m.mean > T::zero()).then(|| m.variance / m.mean - T::one())
}

/// Positive roots in `J` of the first-order Mandel parameter under each published route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelRoots<T> {
    /// Root of `4J^2 + 3J - 3`: `(sqrt(57) - 3)/8`.
    pub printed: T,
    /// From the `(Delta n)^2` line: root of `4J^2 + 4J - 3`, i.e. `1/2`.
    pub variance_line: T,
    /// From `<N>` and `<N^2>`: first-order `Q = lambda'(1 - 3J/2)`, root `2/3`.
    pub moments: T,
}

pub fn mandel_roots<T: Real>() -> MandelRoots<T> {
    let quad_root = |b: f64, c: f64| T::lit((-b + (b * b - 16.0 * c).sqrt()) / 8.0);
    MandelRoots {
        printed: quad_root(3.0, -3.0),
        variance_line: quad_root(4.0, -3.0),
        moments: T::lit(2.0) / T::lit(3.0),
    }
}

/// True when `|lambda' J gamma|` leaves the window where the secular terms are small.
pub fn outside_secular_window<T: Real>(params: &ModelParams<T>, j: T, gamma: T) -> bool {
    (params.lambda_prime() * j * gamma).abs() > T::lit(SECULAR_WINDOW)
}
