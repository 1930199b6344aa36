//! Point clouds, empirical measures, shape samplers and ground metrics.

mod io;
mod measure;
mod shapes;
mod transport;

use rayon::prelude::*;
use thiserror::Error;

pub use io::{read_csv, read_json, read_measure, write_csv, write_json, write_measure};
pub use measure::{EmpiricalMeasure, MeasureJson, MASS_TOLERANCE};
pub use shapes::{sample_shape, Circle, NoiseSpec, ShapeKind, ShapeSpec};
pub use transport::{wasserstein, wasserstein_with, TransportPlan, WassersteinOptions};

#[derive(Debug, Error)]
pub enum PointCloudError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point cloud is empty")]
    Empty,
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("point {index} has coordinate {value} outside [-1, 1]")]
    OutOfBox { index: usize, value: f64 },
    #[error("{points} points but {weights} weights")]
    WeightCount { points: usize, weights: usize },
    #[error("invalid weight {0}")]
    InvalidWeight(f64),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("transport simplex exceeded its iteration budget")]
    TransportDidNotConverge,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// `min_p ‖x − p‖₂` over the rows of a row-major point buffer.
pub fn distance_function(cloud: &[f64], dim: usize, x: &[f64]) -> f64 {
    cloud
        .chunks_exact(dim)
        .map(|p| p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// [`distance_function`] at every row of `points`, in parallel.
pub fn distance_function_many(cloud: &[f64], dim: usize, points: &[f64]) -> Vec<f64> {
    points
        .par_chunks_exact(dim)
        .map(|x| distance_function(cloud, dim, x))
        .collect()
}

/// Hausdorff distance between two finite point sets (row-major buffers).
pub fn hausdorff(a: &[f64], b: &[f64], dim: usize) -> Result<f64, PointCloudError> {
    if dim == 0 {
        return Err(PointCloudError::ZeroDimension);
    }
    if !a.len().is_multiple_of(dim) || !b.len().is_multiple_of(dim) {
        return Err(PointCloudError::DimensionMismatch {
            expected: dim,
            found: if !a.len().is_multiple_of(dim) {
                a.len() % dim
            } else {
                b.len() % dim
            },
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(PointCloudError::Empty);
    }
    let directed = |from: &[f64], to: &[f64]| {
        from.chunks_exact(dim)
            .map(|x| distance_function(to, dim, x))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Hausdorff distance between the supports of two measures.
pub fn hausdorff_measures(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
) -> Result<f64, PointCloudError> {
    if a.dim() != b.dim() {
        return Err(PointCloudError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    hausdorff(a.coords(), b.coords(), a.dim())
}

/// Outcome of checking `|E_a[c] − E_b[c]| ≤ η · d_W(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalGap {
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Tests the transport inequality for an `eta`-Lipschitz test function `c`.
pub fn transport_functional_gap(
    a: &EmpiricalMeasure,
    b: &EmpiricalMeasure,
    c: impl Fn(&[f64]) -> f64,
    eta: f64,
) -> Result<FunctionalGap, PointCloudError> {
    let (dw, _) = wasserstein(a, b)?;
    let mean =
        |m: &EmpiricalMeasure| -> f64 { m.points().zip(m.weights()).map(|(x, w)| w * c(x)).sum() };
    let gap = (mean(a) - mean(b)).abs();
    let bound = eta * dw;
    Ok(FunctionalGap {
        gap,
        bound,
        holds: gap <= bound + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff(&[0.0, 0.5], &[0.0, 0.5], 1).unwrap(), 0.0);
        assert_eq!(hausdorff(&[0.0], &[0.0, 1.0], 1).unwrap(), 1.0);
        assert_eq!(hausdorff(&[0.0, 0.0], &[0.3, 0.4], 2).unwrap(), 0.5);
        assert!(matches!(
            hausdorff(&[], &[0.0], 1),
            Err(PointCloudError::Empty)
        ));
    }

    #[test]
    fn distance_function_examples() {
        let circle: Vec<f64> = (0..8)
            .flat_map(|k| {
                let t = 2.0 * PI * k as f64 / 8.0;
                [0.4 * t.cos(), 0.4 * t.sin()]
            })
            .collect();
        assert!((distance_function(&circle, 2, &[0.0, 0.0]) - 0.4).abs() < 1e-15);
        assert_eq!(distance_function(&circle, 2, &circle[2..4]), 0.0);
        assert_eq!(distance_function(&[-1.0, 1.0], 1, &[0.0]), 1.0);
    }

    #[test]
    fn functional_gap_trivial_cases() {
        let a = EmpiricalMeasure::uniform(1, vec![vec![0.0]]).unwrap();
        let b = EmpiricalMeasure::uniform(1, vec![vec![1.0]]).unwrap();
        let constant = transport_functional_gap(&a, &b, |_| 3.0, 0.1).unwrap();
        assert!(constant.holds && constant.gap == 0.0);
        let identity = transport_functional_gap(&a, &b, |x| x[0], 1.0).unwrap();
        assert!(identity.holds);
        assert!((identity.gap - 1.0).abs() < 1e-15);
    }
}
