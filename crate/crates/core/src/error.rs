use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("beta must be positive and finite, got {0}")]
    NonPositiveBeta(f64),
    #[error("lambda must be finite, got {0}")]
    NonFiniteLambda(f64),
    #[error("|lambda'| = {0} is outside the perturbative regime (must be < 1)")]
    NonPerturbative(f64),
    #[error("level n = {n} exceeds the allowed cutoff {cutoff}")]
    LevelAboveCutoff { n: usize, cutoff: usize },
    #[error("dimensionless level e_{n} = {value} is not positive")]
    NonPositiveLevel { n: usize, value: f64 },
    #[error("J must be nonnegative and finite, got {0}")]
    InvalidAction(f64),
    #[error("coherent-state series does not converge within {max_terms} terms")]
    Divergent { max_terms: usize },
    #[error("tail mass {tail:e} beyond the cutoff exceeds the guard {guard:e}")]
    TailBeyondCutoff { tail: f64, guard: f64 },
    #[error("no truncation dimension up to {max_dim} brings the tail mass below {guard:e}")]
    DimensionExhausted { max_dim: usize, guard: f64 },
    #[error("coherent-state series starting at n = 1 is empty for J = 0")]
    EmptySeries,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state norm {0} deviates from one")]
    Unnormalized(f64),
    #[error("state mass {mass:e} in the last {rows} basis rows exceeds {guard:e}")]
    EdgeMass { mass: f64, rows: usize, guard: f64 },
    #[error("operator is not self-adjoint within tolerance")]
    NotSelfAdjoint,
    #[error("matrix dimension must be at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
