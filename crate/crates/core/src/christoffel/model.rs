use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{box_grid, moment_matrix, BasisFamily, BasisSpec, ChristoffelError, MomentMatrix};
use crate::pointcloud::EmpiricalMeasure;

/// Total number of points in the grid used for the cached sup-norm estimate.
const SUP_GRID_BUDGET: usize = 1 << 14;

/// A fitted Christoffel polynomial: basis plus Cholesky factor of the
/// moment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelModel {
    moment: MomentMatrix,
    factor: Vec<f64>,
    log_sup_norm: f64,
}

impl ChristoffelModel {
    /// Fits the Christoffel polynomial of `measure` at the degree of `basis`.
    pub fn fit(
        measure: &EmpiricalMeasure,
        basis: &BasisSpec,
        eps: f64,
    ) -> Result<Self, ChristoffelError> {
        let moment = moment_matrix(measure, basis, eps)?;
        Self::from_moment(moment)
    }

    pub fn from_moment(moment: MomentMatrix) -> Result<Self, ChristoffelError> {
        let factor = moment.cholesky()?;
        let mut model = Self {
            moment,
            factor,
            log_sup_norm: f64::NAN,
        };
        let dim = model.basis().dim();
        let per_axis = (SUP_GRID_BUDGET as f64).powf(1.0 / dim as f64).floor() as usize;
        let grid = box_grid(dim, per_axis.max(2));
        model.log_sup_norm = model.sup_norm(&grid)?.log10();
        Ok(model)
    }

    pub fn basis(&self) -> &BasisSpec {
        self.moment.basis()
    }

    pub fn moment(&self) -> &MomentMatrix {
        &self.moment
    }

    /// Lower-triangular factor `L` with `L Lᵀ = M`, row-major.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    pub fn eps(&self) -> f64 {
        self.moment.eps()
    }

    /// `log₁₀ ‖Λ‖_∞` estimated on a regular grid of about 16k points. A grid
    /// maximum, so a lower bound on the true sup.
    pub fn log_sup_norm(&self) -> f64 {
        self.log_sup_norm
    }

    /// `Λ(x) = ‖L⁻¹ b(x)‖²`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut scratch = Scratch::new(self.basis());
        self.eval_with(x, &mut scratch)
    }

    pub fn log_eval(&self, x: &[f64]) -> f64 {
        self.eval(x).log10()
    }

    fn eval_with(&self, x: &[f64], scratch: &mut Scratch) -> f64 {
        let s = self.basis().len();
        self.basis()
            .eval_into(x, &mut scratch.table, &mut scratch.v);
        // Forward substitution in place: v ← L⁻¹ b(x).
        let v = &mut scratch.v;
        let mut total = 0.0;
        for i in 0..s {
            let row = &self.factor[i * s..i * s + i];
            let dot: f64 = row.iter().zip(&v[..i]).map(|(a, b)| a * b).sum();
            let vi = (v[i] - dot) / self.factor[i * s + i];
            v[i] = vi;
            total += vi * vi;
        }
        total
    }

    /// Λ at every row of a row-major point buffer, in parallel.
    pub fn eval_many(&self, points: &[f64]) -> Vec<f64> {
        let dim = self.basis().dim();
        points
            .par_chunks_exact(dim)
            .map_init(|| Scratch::new(self.basis()), |sc, x| self.eval_with(x, sc))
            .collect()
    }

    pub fn log_eval_many(&self, points: &[f64]) -> Vec<f64> {
        let mut out = self.eval_many(points);
        out.iter_mut().for_each(|v| *v = v.log10());
        out
    }

    /// Grid maximum of Λ over a row-major point buffer.
    pub fn sup_norm(&self, grid: &[f64]) -> Result<f64, ChristoffelError> {
        if grid.len() < self.basis().dim() {
            return Err(ChristoffelError::EmptyGrid);
        }
        Ok(self.eval_many(grid).into_iter().fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            dim: self.basis().dim(),
            degree: self.basis().degree(),
            family: self.basis().family(),
            eps: self.eps(),
            moment: self.moment.entries().to_vec(),
            factor: self.factor.clone(),
            log_sup_norm: self.log_sup_norm,
        }
    }

    pub fn from_json(raw: ModelJson) -> Result<Self, ChristoffelError> {
        let basis = BasisSpec::new(raw.dim, raw.degree, raw.family)?;
        let s = basis.len();
        if raw.moment.len() != s * s || raw.factor.len() != s * s {
            return Err(ChristoffelError::Parse(format!(
                "expected {} matrix entries, found {} and {}",
                s * s,
                raw.moment.len(),
                raw.factor.len()
            )));
        }
        if (0..s).any(|i| !(raw.factor[i * s + i] > 0.0)) {
            return Err(ChristoffelError::Parse(
                "factor has a non-positive pivot".into(),
            ));
        }
        Ok(Self {
            moment: MomentMatrix::from_parts(basis, raw.moment, raw.eps),
            factor: raw.factor,
            log_sup_norm: raw.log_sup_norm,
        })
    }
}

/// Serialized model: basis, row-major moment matrix, ε and factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    pub dim: usize,
    pub degree: usize,
    pub family: BasisFamily,
    pub eps: f64,
    pub moment: Vec<f64>,
    pub factor: Vec<f64>,
    pub log_sup_norm: f64,
}

struct Scratch {
    table: Vec<f64>,
    v: Vec<f64>,
}

impl Scratch {
    fn new(basis: &BasisSpec) -> Self {
        Self {
            table: vec![0.0; basis.table_len()],
            v: vec![0.0; basis.len()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::christoffel::basis_size;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(points: &[f64]) -> EmpiricalMeasure {
        EmpiricalMeasure::uniform(1, points.iter().map(|p| vec![*p]).collect()).unwrap()
    }

    #[test]
    fn two_point_model_is_one_plus_x_squared() {
        let basis = BasisSpec::new(1, 1, BasisFamily::Monomial).unwrap();
        let model = ChristoffelModel::fit(&line(&[-1.0, 1.0]), &basis, 0.0).unwrap();
        assert_eq!(model.eval(&[0.0]), 1.0);
        assert_eq!(model.eval(&[1.0]), 2.0);
        for x in [-0.9, -0.3, 0.25, 0.7] {
            assert!((model.eval(&[x]) - (1.0 + x * x)).abs() < 1e-14);
        }
        assert!((model.log_sup_norm() - 2f64.log10()).abs() < 1e-14);
    }

    #[test]
    fn single_point_is_degenerate_without_regularization() {
        let basis = BasisSpec::new(1, 1, BasisFamily::Monomial).unwrap();
        let err = ChristoffelModel::fit(&line(&[0.0]), &basis, 0.0).unwrap_err();
        assert!(matches!(err, ChristoffelError::DegenerateSampleSet { .. }));
        assert!(err.to_string().contains("regularization"));
        assert!(ChristoffelModel::fit(&line(&[0.0]), &basis, 1e-3).is_ok());
    }

    #[test]
    fn log_eval_uses_base_ten() {
        // Λ = 1 + x² with x = 3 gives 10; outside the box but a clean oracle.
        let basis = BasisSpec::new(1, 1, BasisFamily::Monomial).unwrap();
        let model = ChristoffelModel::fit(&line(&[-1.0, 1.0]), &basis, 0.0).unwrap();
        assert_eq!(model.log_eval(&[0.0]), 0.0);
        assert!((model.log_eval(&[3.0]) - 1.0).abs() < 1e-15);
        assert!((model.log_eval(&[99f64.sqrt()]) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_when_sample_count_equals_basis_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, d) in [(1, 3), (2, 2), (2, 3), (3, 1)] {
            let s = basis_size(n, d).unwrap();
            let pts: Vec<Vec<f64>> = (0..s)
                .map(|_| (0..n).map(|_| rng.random_range(-0.9..0.9)).collect())
                .collect();
            let mu = EmpiricalMeasure::uniform(n, pts.clone()).unwrap();
            let basis = BasisSpec::new(n, d, BasisFamily::ChebyshevTensor).unwrap();
            let model = ChristoffelModel::fit(&mu, &basis, 0.0).unwrap();
            for p in &pts {
                assert!((model.eval(p) / s as f64 - 1.0).abs() < 1e-6);
            }
            // One point short of s: the matrix has rank N < s.
            let short = EmpiricalMeasure::uniform(n, pts[1..].to_vec()).unwrap();
            assert!(ChristoffelModel::fit(&short, &basis, 0.0).is_err());
        }
    }

    #[test]
    fn eval_many_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let mu = EmpiricalMeasure::uniform(2, pts).unwrap();
        let basis = BasisSpec::new(2, 4, BasisFamily::ChebyshevTensor).unwrap();
        let model = ChristoffelModel::fit(&mu, &basis, 0.0).unwrap();
        let grid = box_grid(2, 17);
        let many = model.eval_many(&grid);
        for (x, v) in grid.chunks(2).zip(&many) {
            assert_eq!(model.eval(x).to_bits(), v.to_bits());
        }
    }

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts: Vec<Vec<f64>> = (0..80)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let mu = EmpiricalMeasure::uniform(2, pts).unwrap();
        let basis = BasisSpec::new(2, 3, BasisFamily::Monomial).unwrap();
        let model = ChristoffelModel::fit(&mu, &basis, 1e-9).unwrap();
        let text = serde_json::to_string(&model.to_json()).unwrap();
        let back = ChristoffelModel::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, model);
        for x in box_grid(2, 9).chunks(2) {
            assert_eq!(back.eval(x).to_bits(), model.eval(x).to_bits());
        }
    }
}
