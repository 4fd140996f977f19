//! Paired analytic/numeric observable reports.

use std::fmt;

use crate::analytic;
use crate::error::Result;
use crate::gcs::{
    build_state, numeric_observables_with, GKState, NumericObservables, ObservableOperators,
    SeriesStart, StateOptions,
};
use crate::scalar::Real;
use crate::spectrum::ModelParams;

/// Tail mass above which a state counts as pressing against the `lambda > 0` cutoff.
pub const CUTOFF_PROXIMITY: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    ARe,
    AIm,
    X,
    P,
    VarX,
    VarP,
    UncertaintyProduct,
    Energy,
    MeanN,
    MeanNSq,
    VarN,
    MandelQ,
}

impl Observable {
    pub const ALL: [Observable; 12] = [
        Observable::ARe,
        Observable::AIm,
        Observable::X,
        Observable::P,
        Observable::VarX,
        Observable::VarP,
        Observable::UncertaintyProduct,
        Observable::Energy,
        Observable::MeanN,
        Observable::MeanNSq,
        Observable::VarN,
        Observable::MandelQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::ARe => "a_re",
            Observable::AIm => "a_im",
            Observable::X => "x",
            Observable::P => "p",
            Observable::VarX => "var_x",
            Observable::VarP => "var_p",
            Observable::UncertaintyProduct => "uncertainty_product",
            Observable::Energy => "energy",
            Observable::MeanN => "mean_n",
            Observable::MeanNSq => "mean_n_sq",
            Observable::VarN => "var_n",
            Observable::MandelQ => "mandel_q",
        }
    }

    /// Closed-form value as published.
    pub fn analytic<T: Real>(self, params: &ModelParams<T>, j: T, gamma: T) -> T {
        match self {
            Observable::ARe => analytic::expect_a(params, j, gamma).re,
            Observable::AIm => analytic::expect_a(params, j, gamma).im,
            Observable::X => analytic::expect_x(params, j, gamma),
            Observable::P => analytic::expect_p(params, j, gamma),
            Observable::VarX => analytic::variance_x(params, j, gamma),
            Observable::VarP => analytic::variance_p(params, j, gamma),
            Observable::UncertaintyProduct => analytic::uncertainty_product(params, j),
            Observable::Energy => analytic::energy_expect(params, j, gamma),
            Observable::MeanN => analytic::number_moments(params, j).mean,
            Observable::MeanNSq => analytic::number_moments(params, j).mean_sq,
            Observable::VarN => analytic::number_moments(params, j).variance,
            Observable::MandelQ => analytic::mandel_q(params, j),
        }
    }

    pub fn numeric<T: Real>(self, o: &NumericObservables<T>) -> Option<T> {
        Some(match self {
            Observable::ARe => o.mean_a.re,
            Observable::AIm => o.mean_a.im,
            Observable::X => o.mean_x,
            Observable::P => o.mean_p,
            Observable::VarX => o.var_x,
            Observable::VarP => o.var_p,
            Observable::UncertaintyProduct => o.uncertainty_product,
            Observable::Energy => o.energy,
            Observable::MeanN => o.mean_n,
            Observable::MeanNSq => o.mean_n_sq,
            Observable::VarN => o.var_n,
            Observable::MandelQ => return o.mandel_q,
        })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValidityFlag {
    /// `|lambda' J gamma|` is beyond the window where the secular terms stay small.
    SecularWindow,
    /// The `lambda > 0` series cutoff discards a non-negligible tail.
    CutoffProximity,
}

impl ValidityFlag {
    pub fn name(self) -> &'static str {
        match self {
            ValidityFlag::SecularWindow => "secular_window",
            ValidityFlag::CutoffProximity => "cutoff_proximity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservablePair<T> {
    pub observable: Observable,
    pub analytic: T,
    pub numeric: Option<T>,
}

impl<T: Real> ObservablePair<T> {
    /// `|analytic - numeric|`, recomputed on every call.
    pub fn discrepancy(&self) -> Option<T> {
        self.numeric.map(|n| (self.analytic - n).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport<T> {
    pub params: ModelParams<T>,
    pub j: T,
    pub gamma: T,
    pub n_start: SeriesStart,
    pub dim: usize,
    pub tail_mass: T,
    pub pairs: Vec<ObservablePair<T>>,
    pub flags: Vec<ValidityFlag>,
}

impl<T: Real> ObservableReport<T> {
    pub fn from_state(state: &GKState<T>, numeric: &NumericObservables<T>) -> Self {
        let (params, j, gamma) = (*state.params(), state.j(), state.gamma());
        let pairs = Observable::ALL
            .iter()
            .map(|&observable| ObservablePair {
                observable,
                analytic: observable.analytic(&params, j, gamma),
                numeric: observable.numeric(numeric),
            })
            .collect();
        let mut flags = Vec::new();
        if analytic::outside_secular_window(&params, j, gamma) {
            flags.push(ValidityFlag::SecularWindow);
        }
        if params.lambda() > T::zero() && state.tail_mass() > T::lit(CUTOFF_PROXIMITY) {
            flags.push(ValidityFlag::CutoffProximity);
        }
        Self {
            params,
            j,
            gamma,
            n_start: state.n_start(),
            dim: state.dim(),
            tail_mass: state.tail_mass(),
            pairs,
            flags,
        }
    }

    pub fn pair(&self, observable: Observable) -> Option<&ObservablePair<T>> {
        self.pairs.iter().find(|p| p.observable == observable)
    }

    pub fn discrepancy(&self, observable: Observable) -> Option<T> {
        self.pair(observable).and_then(ObservablePair::discrepancy)
    }
}

pub fn build_report<T: Real>(
    params: &ModelParams<T>,
    j: T,
    gamma: T,
    options: &StateOptions<T>,
) -> Result<ObservableReport<T>> {
    let state = build_state(params, j, gamma, options)?;
    let ops = ObservableOperators::new(params, state.dim());
    let numeric = numeric_observables_with(&state, &ops)?;
    Ok(ObservableReport::from_state(&state, &numeric))
}
