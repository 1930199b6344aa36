//! Freudenthal triangulations of the box, point location, piecewise-linear
//! interpolation and lower-star filtrations.

mod filtration;
mod freudenthal;

use thiserror::Error;

pub use filtration::{lower_star, pl_interpolate, Filtration};
pub use freudenthal::{build_freudenthal, FreudenthalComplex, Location, DEFAULT_SIMPLEX_CAP};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("resolution must be positive")]
    ZeroResolution,
    #[error("complex needs {requested} simplices, above the cap of {cap}")]
    ResourceLimit { requested: usize, cap: usize },
    #[error("coordinate {0} lies outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex {index} has a non-finite value")]
    NonFiniteValue { index: usize },
    #[error("expected {expected} vertex values, found {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("point lies in a {needed}-simplex, above the stored skeleton")]
    SkeletonTooSmall { needed: usize },
}

/// Bottleneck bound `L · 2√n / m` between the sublevel diagram of an
/// `L`-Lipschitz function and its lower-star approximation on `K_m`.
pub fn pl_error_bound(lipschitz: f64, n: usize, m: usize) -> f64 {
    lipschitz * 2.0 * (n as f64).sqrt() / m as f64
}
