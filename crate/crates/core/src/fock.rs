//! Dense complex vectors and matrices on a truncated number basis.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of top basis rows a state must stay away from for variances to be trusted.
pub const EDGE_ROWS: usize = 4;
/// Maximum probability mass tolerated in the top [`EDGE_ROWS`] rows.
pub const EDGE_GUARD: f64 = 1e-10;
/// Allowed deviation of a state's norm from one before expectations are refused.
pub const NORM_TOLERANCE: f64 = 1e-8;
/// Self-adjointness tolerance (relative to the largest entry).
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Variances in `[-VARIANCE_CLAMP, 0)` are reported as zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex::new(T::zero(), T::zero()); dim])
    }

    /// Number state `|n>`.
    pub fn basis(dim: usize, n: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[n] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let inv = T::one() / self.norm();
        Self::new(self.amplitudes.iter().map(|c| c * inv).collect())
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// Probability mass in the top `rows` basis states.
    pub fn edge_mass(&self, rows: usize) -> T {
        let start = self.dim().saturating_sub(rows);
        self.amplitudes[start..]
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.amplitudes.iter().map(|a| a * c).collect())
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }
}

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> FockMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() }.into())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Truncated annihilation operator: `a|n> = sqrt(n)|n-1>`.
    pub fn lower(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if j == i + 1 {
                T::from_index(j).sqrt().into()
            } else {
                T::zero().into()
            }
        })
    }

    /// Truncated creation operator: `a^dag|n> = sqrt(n+1)|n+1>`.
    pub fn raise(dim: usize) -> Self {
        Self::lower(dim).adjoint()
    }

    pub fn number(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                T::from_index(i).into()
            } else {
                T::zero().into()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, e| m.max(e.norm()))
    }

    pub fn is_self_adjoint(&self, rel_tol: T) -> bool {
        let scale = self.max_abs_entry().max(T::one());
        (0..self.dim).all(|i| {
            (i..self.dim)
                .all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= rel_tol * scale)
        })
    }

    /// Largest entrywise difference restricted to rows and columns `< block`.
    pub fn max_abs_diff_block(&self, other: &Self, block: usize) -> Result<T> {
        check_dims(self.dim, other.dim)?;
        let block = block.min(self.dim);
        let mut m = T::zero();
        for i in 0..block {
            for j in 0..block {
                m = m.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &FockVector<T>) -> Result<FockVector<T>> {
        check_dims(self.dim, v.dim())?;
        let x = v.amplitudes();
        let out = (0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                        acc + a * b
                    })
            })
            .collect();
        Ok(FockVector::new(out))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }
}

impl<T: Real> Add for &FockMatrix<T> {
    type Output = FockMatrix<T>;

    fn add(self, rhs: Self) -> FockMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        FockMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &FockMatrix<T> {
    type Output = FockMatrix<T>;

    fn sub(self, rhs: Self) -> FockMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        FockMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &FockMatrix<T> {
    type Output = FockMatrix<T>;

    fn mul(self, rhs: Self) -> FockMatrix<T> {
        self.matmul(rhs).expect("dimension mismatch")
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

fn check_normalized<T: Real>(state: &FockVector<T>) -> Result<()> {
    let norm = state.norm();
    if (norm - T::one()).abs() > T::tol(NORM_TOLERANCE) {
        return Err(Error::Unnormalized(norm.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `<psi|op|psi>`. The imaginary part is dropped when `op` is self-adjoint.
pub fn expectation<T: Real>(state: &FockVector<T>, op: &FockMatrix<T>) -> Result<Complex<T>> {
    check_dims(state.dim(), op.dim())?;
    check_normalized(state)?;
    let value = state.inner(&op.apply(state)?)?;
    if op.is_self_adjoint(T::tol(HERMITIAN_TOLERANCE)) {
        Ok(Complex::new(value.re, T::zero()))
    } else {
        Ok(value)
    }
}

/// `<op^2> - <op>^2` for a self-adjoint `op`, refusing states with mass near the truncation edge.
pub fn variance<T: Real>(state: &FockVector<T>, op: &FockMatrix<T>) -> Result<T> {
    check_dims(state.dim(), op.dim())?;
    check_normalized(state)?;
    if !op.is_self_adjoint(T::tol(HERMITIAN_TOLERANCE)) {
        return Err(Error::NotSelfAdjoint);
    }
    let edge = state.edge_mass(EDGE_ROWS);
    if edge >= T::lit(EDGE_GUARD) {
        return Err(Error::EdgeMass {
            mass: edge.to_f64().unwrap_or(f64::NAN),
            rows: EDGE_ROWS,
            guard: EDGE_GUARD,
        });
    }
    let image = op.apply(state)?;
    let mean = state.inner(&image)?.re;
    let var = image.norm_sqr() - mean * mean;
    if var < T::zero() && var >= -T::lit(VARIANCE_CLAMP) {
        Ok(T::zero())
    } else {
        Ok(var)
    }
}
