//! Synthetic clouds used by the experiments.

use cdpers::pointcloud::{Circle, NoiseSpec, ShapeKind, ShapeSpec};

/// Standard grid resolution for an ambient dimension.
pub fn default_resolution(n: usize) -> usize {
    if n <= 2 {
        250
    } else {
        50
    }
}

/// Uniform sample of five evenly spaced intervals of width 0.15 in `[-1, 1]`.
pub fn five_intervals(sample_count: usize, seed: u64) -> ShapeSpec {
    ShapeSpec {
        kind: ShapeKind::Intervals1d {
            intervals: vec![
                [-0.9, -0.75],
                [-0.4875, -0.3375],
                [-0.075, 0.075],
                [0.3375, 0.4875],
                [0.75, 0.9],
            ],
        },
        sample_count,
        noise: NoiseSpec {
            rng_seed: seed,
            ..Default::default()
        },
    }
}

/// How the two circles of a figure-eight sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirclePair {
    /// Separated by a clear gap.
    Disjoint,
    /// Tangent at one point.
    Touching,
    /// Crossing, with a thin lens between the two loops.
    Overlapping,
}

impl CirclePair {
    pub const ALL: [CirclePair; 3] = [Self::Disjoint, Self::Touching, Self::Overlapping];

    /// Expected `(β₀, β₁)` of the union, ignoring the thin lens.
    pub fn expected_betti(self) -> (usize, usize) {
        match self {
            Self::Disjoint => (2, 2),
            Self::Touching | Self::Overlapping => (1, 2),
        }
    }

    fn half_distance(self) -> f64 {
        match self {
            Self::Disjoint => 0.55,
            Self::Touching => RADIUS,
            Self::Overlapping => 0.37,
        }
    }
}

const RADIUS: f64 = 0.4;
/// Gaussian jitter that keeps circle samples off the degenerate quadrics,
/// of the order of the grid spacing at `m = 250`.
pub const CIRCLE_SIGMA: f64 = 0.01;
/// Regularization for degree-12 fits on jittered circles, whose moment
/// matrices are numerically close to singular.
pub const CIRCLE_EPS: f64 = 1e-12;

/// Two equal circles of radius 0.4 on the horizontal axis.
pub fn figure_eight(pair: CirclePair, sample_count: usize, seed: u64) -> ShapeSpec {
    let h = pair.half_distance();
    ShapeSpec {
        kind: ShapeKind::TwoCircles {
            first: Circle {
                center: [-h, 0.0],
                radius: RADIUS,
            },
            second: Circle {
                center: [h, 0.0],
                radius: RADIUS,
            },
            first_fraction: None,
        },
        sample_count,
        noise: NoiseSpec {
            uniform_count: 0,
            gaussian_sigma: CIRCLE_SIGMA,
            rng_seed: seed,
        },
    }
}

/// An annulus, a filled triangle and a filled square: three components and
/// one loop.
pub fn three_shapes(sample_count: usize, uniform_noise: usize, seed: u64) -> ShapeSpec {
    ShapeSpec {
        kind: ShapeKind::Union {
            parts: vec![
                ShapeKind::Disk {
                    center: [-0.45, 0.4],
                    radius: 0.38,
                    inner_radius: 0.2,
                },
                ShapeKind::Triangle {
                    vertices: [[0.1, 0.1], [0.85, 0.1], [0.475, 0.8]],
                },
                ShapeKind::Square {
                    center: [-0.1, -0.55],
                    side: 0.5,
                },
            ],
            fractions: None,
        },
        sample_count,
        noise: NoiseSpec {
            uniform_count: uniform_noise,
            gaussian_sigma: 0.0,
            rng_seed: seed,
        },
    }
}

/// Evenly spaced points on the twelve edges of a cube of edge 1.5, with
/// small Gaussian jitter and `uniform_noise` outliers.
pub fn cube_skeleton(points_per_edge: usize, uniform_noise: usize, seed: u64) -> ShapeSpec {
    ShapeSpec {
        kind: ShapeKind::CubeSkeleton {
            center: [0.0; 3],
            edge_length: 1.5,
        },
        sample_count: 12 * points_per_edge,
        noise: NoiseSpec {
            uniform_count: uniform_noise,
            gaussian_sigma: 0.025,
            rng_seed: seed,
        },
    }
}

/// Number of independent loops in the cube's edge graph.
pub const CUBE_LOOPS: usize = 5;
