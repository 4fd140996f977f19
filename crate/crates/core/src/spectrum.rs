//! Model parameters and the deformed spectrum `E_n = beta*n - (lambda/2)*n^2`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Above this level index `rho_n` is accumulated in log space.
pub const DIRECT_RHO_MAX: usize = 30;

/// Physical parameters of the nonlinear oscillator.
///
/// `lambda_prime = lambda / beta` and `alpha_sq = beta * (beta + lambda)` are derived
/// once at construction; `alpha` is never chosen independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    beta: T,
    lambda: T,
    lambda_prime: T,
    alpha_sq: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(beta: T, lambda: T) -> Result<Self> {
        if !beta.is_finite() || beta <= T::zero() {
            return Err(Error::NonPositiveBeta(beta.to_f64().unwrap_or(f64::NAN)));
        }
        if !lambda.is_finite() {
            return Err(Error::NonFiniteLambda(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        let lambda_prime = lambda / beta;
        if lambda_prime.abs() >= T::one() {
            return Err(Error::NonPerturbative(
                lambda_prime.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self {
            beta,
            lambda,
            lambda_prime,
            alpha_sq: beta * (beta + lambda),
        })
    }

    /// Builds the parameters from `beta` and the dimensionless nonlinearity `lambda' = lambda/beta`.
    pub fn with_lambda_prime(beta: T, lambda_prime: T) -> Result<Self> {
        Self::new(beta, lambda_prime * beta)
    }

    /// Same `beta`, `lambda = 0`.
    pub fn harmonic(&self) -> Self {
        Self {
            beta: self.beta,
            lambda: T::zero(),
            lambda_prime: T::zero(),
            alpha_sq: self.beta * self.beta,
        }
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn lambda_prime(&self) -> T {
        self.lambda_prime
    }

    pub fn alpha_sq(&self) -> T {
        self.alpha_sq
    }

    pub fn alpha(&self) -> T {
        self.alpha_sq.sqrt()
    }

    /// Dimensionless level `e_n = n (1 - lambda' n / 2)`, without any range check.
    pub fn level(&self, n: usize) -> T {
        let n = T::from_index(n);
        n * (T::one() - self.lambda_prime * n / T::lit(2.0))
    }

    /// Energy `E_n = beta*n - (lambda/2)*n^2` with the zero-point energy dropped.
    pub fn energy_level(&self, n: usize) -> Result<T> {
        if let LevelBound::Bounded { positivity, .. } = self.allowed_n_max() {
            if n > positivity {
                return Err(Error::LevelAboveCutoff {
                    n,
                    cutoff: positivity,
                });
            }
        }
        Ok(self.energy_unchecked(n))
    }

    pub(crate) fn energy_unchecked(&self, n: usize) -> T {
        let nf = T::from_index(n);
        self.beta * nf - self.lambda / T::lit(2.0) * nf * nf
    }

    pub fn allowed_n_max(&self) -> LevelBound {
        if self.lambda <= T::zero() {
            return LevelBound::Unbounded;
        }
        LevelBound::Bounded {
            positivity: snapped_floor(T::lit(2.0) * self.beta / self.lambda),
            monotonic: self.monotonic_cutoff(),
        }
    }

    /// Largest `n` up to which `e_0 < e_1 < ... < e_n` (only meaningful for `lambda > 0`).
    fn monotonic_cutoff(&self) -> usize {
        // e_k - e_{k-1} = 1 - lambda' (2k - 1) / 2, positive iff k < 1/lambda' + 1/2
        let mut n = snapped_floor(T::one() / self.lambda_prime + T::lit(0.5));
        while n > 0 && self.level(n) <= self.level(n - 1) {
            n -= 1;
        }
        while self.level(n + 1) > self.level(n) {
            n += 1;
        }
        n
    }

    /// Index bound on the coherent-state series: the monotonicity cutoff for `lambda > 0`.
    pub fn series_cutoff(&self) -> Option<usize> {
        match self.allowed_n_max() {
            LevelBound::Unbounded => None,
            LevelBound::Bounded { monotonic, .. } => Some(monotonic),
        }
    }

    /// `ln rho_n = sum_{k=1..n} ln e_k`.
    pub fn log_rho(&self, n: usize) -> Result<T> {
        let mut acc = T::zero();
        for k in 1..=n {
            acc += self.checked_level(k)?.ln();
        }
        Ok(acc)
    }

    /// `rho_n = e_1 e_2 ... e_n`, with `rho_0 = 1`.
    pub fn rho(&self, n: usize) -> Result<T> {
        if n > DIRECT_RHO_MAX {
            return Ok(self.log_rho(n)?.exp());
        }
        let mut acc = T::one();
        for k in 1..=n {
            acc *= self.checked_level(k)?;
        }
        Ok(acc)
    }

    fn checked_level(&self, k: usize) -> Result<T> {
        let e = self.level(k);
        if e <= T::zero() {
            return Err(Error::NonPositiveLevel {
                n: k,
                value: e.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(e)
    }
}

/// Free-function form of [`ModelParams::new`].
pub fn make_params<T: Real>(beta: T, lambda: T) -> Result<ModelParams<T>> {
    ModelParams::new(beta, lambda)
}

/// Floor, but values within 1e-9 (relative) below an integer count as that integer.
fn snapped_floor<T: Real>(x: T) -> usize {
    let r = x.round();
    let v = if (x - r).abs() <= T::tol(1e-9) * r.abs().max(T::one()) {
        r
    } else {
        x.floor()
    };
    v.max(T::zero()).to_usize().unwrap_or(usize::MAX)
}

/// Admissible level indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelBound {
    /// `lambda <= 0`: every `n` is allowed.
    Unbounded,
    /// `lambda > 0`: `positivity = floor(2 beta/lambda)` keeps `E_n >= 0`;
    /// `monotonic` is the last index with `e_n` strictly increasing.
    Bounded { positivity: usize, monotonic: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry<T> {
    pub n: usize,
    pub energy: T,
    pub level: T,
    pub log_rho: T,
}

/// Tabulated spectrum from `n = 0` up to a requested maximum, clipped at the
/// monotonicity cutoff when `lambda > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<T> {
    pub params: ModelParams<T>,
    pub bound: LevelBound,
    pub entries: Vec<SpectrumEntry<T>>,
}

impl<T: Real> SpectrumTable<T> {
    pub fn new(params: ModelParams<T>, n_max: usize) -> Self {
        let bound = params.allowed_n_max();
        let last = match bound {
            LevelBound::Unbounded => n_max,
            LevelBound::Bounded { monotonic, .. } => n_max.min(monotonic),
        };
        let mut log_rho = T::zero();
        let entries = (0..=last)
            .map(|n| {
                let level = params.level(n);
                if n > 0 {
                    log_rho += level.ln();
                }
                SpectrumEntry {
                    n,
                    energy: params.energy_unchecked(n),
                    level,
                    log_rho,
                }
            })
            .collect();
        Self {
            params,
            bound,
            entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(beta: f64, lambda: f64) -> ModelParams<f64> {
        ModelParams::new(beta, lambda).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let hp = p(1.0, 0.0);
        assert_eq!(hp.lambda_prime(), 0.0);
        assert_eq!(hp.alpha_sq(), 1.0);

        let q = p(1.0, 0.1);
        assert!((q.lambda_prime() - 0.1).abs() < 1e-15);
        assert!((q.alpha_sq() - 1.1).abs() < 1e-15);

        let r = p(2.0, -0.2);
        assert!((r.lambda_prime() + 0.1).abs() < 1e-15);
        assert!((r.alpha_sq() - 3.6).abs() < 1e-15);
        assert_eq!(r.lambda_prime(), r.lambda() / r.beta());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            ModelParams::new(0.0, 0.0),
            Err(Error::NonPositiveBeta(_))
        ));
        assert!(matches!(
            ModelParams::new(-1.0, 0.0),
            Err(Error::NonPositiveBeta(_))
        ));
        assert!(matches!(
            ModelParams::new(1.0, 1.0),
            Err(Error::NonPerturbative(_))
        ));
        assert!(matches!(
            ModelParams::new(1.0, -1.5),
            Err(Error::NonPerturbative(_))
        ));
        assert!(matches!(
            ModelParams::new(1.0, f64::NAN),
            Err(Error::NonFiniteLambda(_))
        ));
    }

    #[test]
    fn energy_levels() {
        assert_eq!(p(1.0, 0.0).energy_level(3).unwrap(), 3.0);
        assert!((p(2.0, 0.2).energy_level(4).unwrap() - 6.4).abs() < 1e-12);
        assert!((p(1.0, -0.2).energy_level(2).unwrap() - 2.4).abs() < 1e-12);
        assert!(matches!(
            p(1.0, 0.1).energy_level(21),
            Err(Error::LevelAboveCutoff { n: 21, cutoff: 20 })
        ));
        // at the positivity bound itself the energy vanishes
        assert!(p(1.0, 0.1).energy_level(20).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cutoffs() {
        assert_eq!(
            p(1.0, 0.1).allowed_n_max(),
            LevelBound::Bounded {
                positivity: 20,
                monotonic: 10
            }
        );
        assert_eq!(p(1.0, -0.1).allowed_n_max(), LevelBound::Unbounded);
        assert_eq!(p(1.0, 0.0).allowed_n_max(), LevelBound::Unbounded);
    }

    #[test]
    fn monotonic_cutoff_matches_direct_scan() {
        for &lambda in &[0.1, 0.093, 0.0971, 0.13, 0.2, 0.05, 0.3, 0.07] {
            let q = p(1.0, lambda);
            let mut scan = 0;
            while q.level(scan + 1) > q.level(scan) {
                scan += 1;
            }
            assert_eq!(q.series_cutoff(), Some(scan), "lambda = {lambda}");
        }
    }

    #[test]
    fn rho_values() {
        assert!((p(1.0, 0.0).rho(3).unwrap() - 6.0).abs() < 1e-15);
        assert!((p(1.0, 0.1).rho(2).unwrap() - 1.71).abs() < 1e-14);
        assert_eq!(p(1.3, 0.2).rho(0).unwrap(), 1.0);
    }

    #[test]
    fn rho_rejects_nonpositive_levels() {
        assert!(matches!(
            p(1.0, 0.5).rho(5),
            Err(Error::NonPositiveLevel { n: 4, .. })
        ));
    }

    #[test]
    fn harmonic_limit_is_factorial() {
        let hp = p(1.7, 0.0);
        let mut fact = 1.0_f64;
        for n in 0..=20 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((hp.rho(n).unwrap() - fact).abs() / fact < 1e-12);
            assert_eq!(hp.energy_level(n).unwrap(), 1.7 * n as f64);
        }
    }

    #[test]
    fn log_space_agrees_with_direct_product() {
        let q = p(1.0, -0.05);
        for n in [5, 30, 31, 60] {
            let direct: f64 = (1..=n).map(|k| q.level(k)).product();
            assert!((q.rho(n).unwrap() - direct).abs() / direct < 1e-12);
        }
    }

    #[test]
    fn table_invariants() {
        let q = p(2.0, 0.3);
        let table = SpectrumTable::new(q, 100);
        assert_eq!(table.entries.len(), q.series_cutoff().unwrap() + 1);
        assert_eq!(table.entries[0].level, 0.0);
        let mut sum_log = 0.0;
        for (i, entry) in table.entries.iter().enumerate() {
            assert!((entry.energy / q.beta() - entry.level).abs() < 1e-14);
            if i > 0 {
                assert!(entry.level > table.entries[i - 1].level);
                sum_log += entry.level.ln();
            }
            assert!((entry.log_rho - sum_log).abs() <= 1e-12 * sum_log.abs().max(1.0));
        }
    }

    #[test]
    fn generic_over_f32() {
        let q = ModelParams::<f32>::new(1.0, 0.1).unwrap();
        assert!((q.rho(2).unwrap() - 1.71).abs() < 1e-5);
        assert_eq!(q.series_cutoff(), Some(10));
    }
}
