//! Christoffel-Darboux persistence of point clouds in `[-1, 1]^n`.
//!
//! A finite sample is turned into its empirical moment matrix, whose inverse
//! defines the Christoffel polynomial `Λ`. The sublevel sets of `log₁₀ Λ` are
//! approximated by a lower-star filtration on a Freudenthal grid, and their
//! persistent homology is computed by boundary-matrix reduction over ℤ/2.

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod christoffel;
pub mod diagram_metrics;
pub mod grid_complex;
pub mod persistence;
pub mod pointcloud;

use thiserror::Error;

pub use christoffel::{
    basis_size, BasisFamily, BasisSpec, ChristoffelError, ChristoffelModel, MomentMatrix,
    StabilityReport,
};
pub use diagram_metrics::{bottleneck, signal_to_noise, Matching, MetricsError};
pub use grid_complex::{build_freudenthal, lower_star, Filtration, FreudenthalComplex, GridError};
pub use persistence::{
    compute_persistence, DiagramMeta, Interval, PersistenceDiagram, PersistenceError,
};
pub use pointcloud::{
    sample_shape, wasserstein, EmpiricalMeasure, NoiseSpec, PointCloudError, ShapeKind, ShapeSpec,
    TransportPlan,
};

/// Any failure of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    PointCloud(#[from] PointCloudError),
    #[error(transparent)]
    Christoffel(#[from] ChristoffelError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}
