//! Generalized (Gazeau-Klauder) coherent states of the quantum nonlinear oscillator
//! `H = ((1 + lambda x^2) p^2 + alpha^2 x^2 / (1 + lambda x^2)) / 2`.
//!
//! Every observable is available two ways: the published first-order closed forms
//! ([`analytic`]) and brute force on a truncated number basis ([`gcs`], [`fock`]), with the
//! Hamiltonian generated symbolically by the ladder-operator engine in [`algebra`].
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64` aliases below fix `f64`.

pub mod algebra;
pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod gcs;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use num_complex;

pub use algebra::{Ladder, LadderPolynomial, LadderWord};
pub use error::{Error, Result};
pub use fock::{FockMatrix, FockVector};
pub use gcs::{GKState, SeriesStart, StateOptions};
pub use report::{Observable, ObservableReport, ValidityFlag};
pub use scalar::Real;
pub use spectrum::{LevelBound, ModelParams, SpectrumTable};

pub type ModelParams64 = ModelParams<f64>;
pub type GKState64 = GKState<f64>;
pub type FockVector64 = FockVector<f64>;
pub type FockMatrix64 = FockMatrix<f64>;
pub type LadderPolynomial64 = LadderPolynomial<f64>;
pub type ObservableReport64 = ObservableReport<f64>;
pub type StateOptions64 = StateOptions<f64>;

pub type ModelParams32 = ModelParams<f32>;
pub type GKState32 = GKState<f32>;
