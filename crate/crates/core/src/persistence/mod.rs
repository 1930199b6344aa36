//! Persistent homology over ℤ/2 by boundary-matrix reduction.

mod diagram;
mod reduction;

use thiserror::Error;

use crate::grid_complex::Filtration;

pub use diagram::{DiagramMeta, Interval, PersistenceDiagram, NOISE_FLOOR};
pub use reduction::{BoundaryMatrix, Pairing};

#[derive(Debug, Error)]
pub enum PersistenceError {
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("malformed diagram: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Turns a pairing into intervals for degrees `0..=max_degree`.
pub fn diagram_from_pairing(
    matrix: &BoundaryMatrix,
    pairing: &Pairing,
    max_degree: usize,
    meta: DiagramMeta,
) -> PersistenceDiagram {
    let mut intervals = vec![Vec::new(); max_degree + 1];
    for &(b, d) in &pairing.pairs {
        let p = matrix.dim(b);
        if p <= max_degree {
            intervals[p].push(Interval::new(matrix.value(b), matrix.value(d)));
        }
    }
    for &e in &pairing.essential {
        let p = matrix.dim(e);
        if p <= max_degree {
            intervals[p].push(Interval::infinite(matrix.value(e)));
        }
    }
    PersistenceDiagram::new(intervals, meta)
}

/// Persistence diagram of a lower-star filtration in degrees up to
/// `max_degree`, by reduction with clearing.
pub fn compute_persistence(filtration: &Filtration<'_>, max_degree: usize) -> PersistenceDiagram {
    let complex = filtration.complex();
    let top = (max_degree + 1).min(complex.top_dim());
    let max_degree = max_degree.min(complex.dim());
    let matrix = BoundaryMatrix::from_filtration(filtration, top);
    let pairing = matrix.reduce();
    let meta = DiagramMeta {
        resolution: Some(complex.resolution()),
        dim: Some(complex.dim()),
        ..Default::default()
    };
    diagram_from_pairing(&matrix, &pairing, max_degree, meta)
}
