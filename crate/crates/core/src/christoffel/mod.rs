//! Polynomial bases, empirical moment matrices and the Christoffel polynomial.
//!
//! The Christoffel polynomial of a measure μ at degree `d` is
//! `Λ(x) = b(x)ᵀ M⁻¹ b(x)` where `M` is the Gram matrix of the basis `b`
//! under μ. It is independent of the chosen basis, small on the support of μ
//! and grows quickly away from it.

mod basis;
mod model;
mod moment;
mod stability;

use thiserror::Error;

use crate::pointcloud::PointCloudError;

pub use basis::{basis_size, BasisFamily, BasisSpec};
pub use model::{ChristoffelModel, ModelJson};
pub use moment::{moment_matrix, MomentMatrix};
pub use stability::{stability_constant, stability_gap, StabilityReport};

#[derive(Debug, Error)]
pub enum ChristoffelError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("basis size C({n}+{d}, {d}) overflows")]
    Overflow { n: usize, d: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(
        "degenerate sample set: moment matrix is singular at pivot {pivot} \
         (samples lie on an algebraic hypersurface of degree ≤ {degree}); \
         retry with regularization, e.g. eps = {suggested_eps:e}"
    )]
    DegenerateSampleSet {
        pivot: usize,
        degree: usize,
        suggested_eps: f64,
    },
    #[error("models use different bases")]
    BasisMismatch,
    #[error("evaluation grid is empty")]
    EmptyGrid,
    #[error("invalid regularization {0}")]
    InvalidEps(f64),
    #[error("malformed model: {0}")]
    Parse(String),
    #[error(transparent)]
    PointCloud(#[from] PointCloudError),
}

/// Regular grid with `per_axis` points per coordinate spanning `[-1, 1]^dim`,
/// returned row-major with coordinate 0 varying fastest.
pub fn box_grid(dim: usize, per_axis: usize) -> Vec<f64> {
    let per_axis = per_axis.max(2);
    let step = 2.0 / (per_axis - 1) as f64;
    let total = per_axis.pow(dim as u32);
    let mut out = Vec::with_capacity(total * dim);
    for mut idx in 0..total {
        for _ in 0..dim {
            out.push(-1.0 + (idx % per_axis) as f64 * step);
            idx /= per_axis;
        }
    }
    out
}
