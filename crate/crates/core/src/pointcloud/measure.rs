use serde::{Deserialize, Serialize};

use super::PointCloudError;

/// Tolerance on the total mass of a measure.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A finitely supported probability measure on `[-1,1]^n`.
///
/// Points are stored row-major in a flat buffer; `point(i)` borrows the
/// `i`-th sample. Weights are nonnegative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Uniform measure `(1/N) Σ δ_{X_i}` on the given samples.
    pub fn uniform(dim: usize, points: Vec<Vec<f64>>) -> Result<Self, PointCloudError> {
        let n = points.len();
        let weights = vec![1.0 / n.max(1) as f64; n];
        Self::weighted(dim, points, weights)
    }

    /// Weighted measure. Weights are rescaled to unit mass.
    pub fn weighted(
        dim: usize,
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self, PointCloudError> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(PointCloudError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            check_in_box(i, p)?;
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords, weights)
    }

    /// Builds a measure from a row-major coordinate buffer.
    pub fn from_flat(
        dim: usize,
        coords: Vec<f64>,
        mut weights: Vec<f64>,
    ) -> Result<Self, PointCloudError> {
        if dim == 0 {
            return Err(PointCloudError::ZeroDimension);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(PointCloudError::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        let len = coords.len() / dim;
        if len == 0 {
            return Err(PointCloudError::Empty);
        }
        if weights.len() != len {
            return Err(PointCloudError::WeightCount {
                points: len,
                weights: weights.len(),
            });
        }
        for (i, p) in coords.chunks_exact(dim).enumerate() {
            check_in_box(i, p)?;
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(PointCloudError::InvalidWeight(*w));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(PointCloudError::InvalidWeight(total));
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(Self {
            dim,
            coords,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major coordinate buffer.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - u).abs() <= MASS_TOLERANCE)
    }

    /// Concatenates the supports, scaling `self` by `t` and `other` by `1 - t`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self, PointCloudError> {
        if self.dim != other.dim {
            return Err(PointCloudError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(PointCloudError::InvalidWeight(t));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        let weights = self
            .weights
            .iter()
            .map(|w| w * t)
            .chain(other.weights.iter().map(|w| w * (1.0 - t)))
            .collect();
        Self::from_flat(self.dim, coords, weights)
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            dim: self.dim,
            points: self.points().map(<[f64]>::to_vec).collect(),
            weights: Some(self.weights.clone()),
        }
    }
}

fn check_in_box(index: usize, p: &[f64]) -> Result<(), PointCloudError> {
    for &c in p {
        if !(c.is_finite() && (-1.0..=1.0).contains(&c)) {
            return Err(PointCloudError::OutOfBox { index, value: c });
        }
    }
    Ok(())
}

/// JSON layout `{"dim": n, "points": [[...]], "weights": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl TryFrom<MeasureJson> for EmpiricalMeasure {
    type Error = PointCloudError;

    fn try_from(value: MeasureJson) -> Result<Self, Self::Error> {
        match value.weights {
            Some(w) => EmpiricalMeasure::weighted(value.dim, value.points, w),
            None => EmpiricalMeasure::uniform(value.dim, value.points),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weights_sum_to_one() {
        let m = EmpiricalMeasure::uniform(2, vec![vec![0.0, 0.0], vec![0.5, -0.5], vec![1.0, 1.0]])
            .unwrap();
        let total: f64 = m.weights().iter().sum();
        assert!((total - 1.0).abs() < MASS_TOLERANCE);
        assert!(m.is_uniform());
        assert_eq!(m.point(1), &[0.5, -0.5]);
    }

    #[test]
    fn weights_are_normalized() {
        let m = EmpiricalMeasure::weighted(1, vec![vec![0.0], vec![0.5]], vec![1.0, 3.0]).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
        assert!(!m.is_uniform());
    }

    #[test]
    fn rejects_points_outside_box() {
        let err = EmpiricalMeasure::uniform(1, vec![vec![1.5]]).unwrap_err();
        assert!(matches!(err, PointCloudError::OutOfBox { index: 0, .. }));
    }

    #[test]
    fn rejects_empty_and_negative_weight() {
        assert!(matches!(
            EmpiricalMeasure::uniform(2, vec![]),
            Err(PointCloudError::Empty)
        ));
        assert!(matches!(
            EmpiricalMeasure::weighted(1, vec![vec![0.0], vec![0.1]], vec![1.0, -0.5]),
            Err(PointCloudError::InvalidWeight(_))
        ));
    }

    #[test]
    fn mixing_halves_keeps_mass() {
        let a = EmpiricalMeasure::uniform(1, vec![vec![0.0], vec![0.5]]).unwrap();
        let m = a.mix(&a, 0.5).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
    }
}
