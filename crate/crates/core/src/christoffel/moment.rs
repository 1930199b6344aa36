use rayon::prelude::*;

use super::{BasisSpec, ChristoffelError};
use crate::pointcloud::EmpiricalMeasure;

/// Samples per accumulation block. Blocks are fixed so the summation order,
/// and hence the result, does not depend on the thread count.
const BLOCK: usize = 512;

/// Empirical Gram matrix `Σ_i w_i b(X_i) b(X_i)ᵀ + ε·I`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    basis: BasisSpec,
    entries: Vec<f64>,
    eps: f64,
}

impl MomentMatrix {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    /// Side length `s`.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size() + col]
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.get(i, i)).sum()
    }

    pub(crate) fn from_parts(basis: BasisSpec, entries: Vec<f64>, eps: f64) -> Self {
        Self {
            basis,
            entries,
            eps,
        }
    }

    /// Lower Cholesky factor, row-major. Fails with `DegenerateSampleSet`
    /// once a pivot drops to `1e-12 · trace / s` or below.
    pub fn cholesky(&self) -> Result<Vec<f64>, ChristoffelError> {
        let s = self.size();
        let trace = self.trace();
        let tol = 1e-12 * trace / s as f64;
        let mut l = vec![0.0; s * s];
        for j in 0..s {
            let row_j = j * s;
            let mut diag = self.entries[row_j + j];
            for k in 0..j {
                diag -= l[row_j + k] * l[row_j + k];
            }
            if !(diag > tol) {
                return Err(ChristoffelError::DegenerateSampleSet {
                    pivot: j,
                    degree: self.basis.degree(),
                    suggested_eps: 1e-10 * trace / s as f64,
                });
            }
            let pivot = diag.sqrt();
            l[row_j + j] = pivot;
            for i in j + 1..s {
                let row_i = i * s;
                let mut v = self.entries[row_i + j];
                for k in 0..j {
                    v -= l[row_i + k] * l[row_j + k];
                }
                l[row_i + j] = v / pivot;
            }
        }
        Ok(l)
    }
}

/// Builds the moment matrix of `measure` in `basis`, shifted by `eps · I`.
pub fn moment_matrix(
    measure: &EmpiricalMeasure,
    basis: &BasisSpec,
    eps: f64,
) -> Result<MomentMatrix, ChristoffelError> {
    if measure.dim() != basis.dim() {
        return Err(ChristoffelError::DimensionMismatch {
            expected: basis.dim(),
            found: measure.dim(),
        });
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(ChristoffelError::InvalidEps(eps));
    }
    let s = basis.len();
    let dim = basis.dim();
    let partials: Vec<Vec<f64>> = measure
        .coords()
        .par_chunks(BLOCK * dim)
        .zip(measure.weights().par_chunks(BLOCK))
        .map(|(coords, weights)| {
            let mut acc = vec![0.0; s * s];
            let mut table = vec![0.0; basis.table_len()];
            let mut b = vec![0.0; s];
            for (x, &w) in coords.chunks_exact(dim).zip(weights) {
                basis.eval_into(x, &mut table, &mut b);
                // Upper triangle only; mirrored below.
                for i in 0..s {
                    let wi = w * b[i];
                    let row = &mut acc[i * s..(i + 1) * s];
                    for j in i..s {
                        row[j] += wi * b[j];
                    }
                }
            }
            acc
        })
        .collect();
    let mut entries = pairwise_sum(partials);
    for i in 0..s {
        entries[i * s + i] += eps;
        for j in 0..i {
            entries[i * s + j] = entries[j * s + i];
        }
    }
    Ok(MomentMatrix {
        basis: basis.clone(),
        entries,
        eps,
    })
}

fn pairwise_sum(mut parts: Vec<Vec<f64>>) -> Vec<f64> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}
