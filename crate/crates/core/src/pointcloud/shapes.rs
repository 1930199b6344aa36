//! Seeded samplers for the synthetic shapes used in experiments.
//!
//! Composite shapes split the sample budget across their parts by exact
//! largest-remainder allocation, so part sizes are reproducible and do not
//! fluctuate with the seed. Inside a part, points are i.i.d. from the
//! part's uniform (arc-length or area) measure, except for the cube
//! skeleton which places evenly spaced points on each edge.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{EmpiricalMeasure, PointCloudError};

/// Noise model applied after drawing the clean sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Number of extra points drawn uniformly from `[-1,1]^n` (M).
    #[serde(default)]
    pub uniform_count: usize,
    /// Per-coordinate standard deviation of the Gaussian perturbation (σ).
    #[serde(default)]
    pub gaussian_sigma: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            uniform_count: 0,
            gaussian_sigma: 0.0,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeKind {
    /// Disjoint closed intervals in `[-1,1]`.
    #[serde(rename = "intervals-1d")]
    Intervals1d {
        intervals: Vec<[f64; 2]>,
    },
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// Two circles; `first_fraction` of the samples go on the first one
    /// (defaults to the arc-length share).
    TwoCircles {
        first: Circle,
        second: Circle,
        #[serde(default)]
        first_fraction: Option<f64>,
    },
    /// Filled disk, or an annulus when `inner_radius > 0`.
    Disk {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        inner_radius: f64,
    },
    Triangle {
        vertices: [[f64; 2]; 3],
    },
    /// Filled axis-aligned square.
    Square {
        center: [f64; 2],
        side: f64,
    },
    /// The twelve edges of an axis-aligned cube. `sample_count` must be a
    /// multiple of 12; each edge receives `sample_count / 12` points.
    CubeSkeleton {
        center: [f64; 3],
        edge_length: f64,
    },
    /// Union of parts of equal ambient dimension. Without explicit
    /// fractions the samples follow the uniform measure on the union, which
    /// requires parts of the same intrinsic dimension.
    Union {
        parts: Vec<ShapeKind>,
        #[serde(default)]
        fractions: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub sample_count: usize,
    #[serde(default)]
    pub noise: NoiseSpec,
}

impl ShapeKind {
    pub fn ambient_dim(&self) -> usize {
        match self {
            ShapeKind::Intervals1d { .. } => 1,
            ShapeKind::CubeSkeleton { .. } => 3,
            ShapeKind::Union { parts, .. } => parts.first().map_or(2, ShapeKind::ambient_dim),
            _ => 2,
        }
    }

    /// Intrinsic dimension and size (length or area) of the support.
    fn measure(&self) -> (usize, f64) {
        match self {
            ShapeKind::Intervals1d { intervals } => (1, intervals.iter().map(|[a, b]| b - a).sum()),
            ShapeKind::Circle { radius, .. } => (1, 2.0 * PI * radius),
            ShapeKind::TwoCircles { first, second, .. } => {
                (1, 2.0 * PI * (first.radius + second.radius))
            }
            ShapeKind::Disk {
                radius,
                inner_radius,
                ..
            } => (2, PI * (radius * radius - inner_radius * inner_radius)),
            ShapeKind::Triangle { vertices } => (2, triangle_area(vertices)),
            ShapeKind::Square { side, .. } => (2, side * side),
            ShapeKind::CubeSkeleton { edge_length, .. } => (1, 12.0 * edge_length),
            ShapeKind::Union { parts, .. } => {
                let dim = parts.first().map_or(0, |p| p.measure().0);
                (dim, parts.iter().map(|p| p.measure().1).sum())
            }
        }
    }

    /// Axis-aligned bounding box as `(lo, hi)` per coordinate.
    fn bounds(&self) -> Vec<(f64, f64)> {
        match self {
            ShapeKind::Intervals1d { intervals } => {
                let lo = intervals.iter().map(|i| i[0]).fold(f64::INFINITY, f64::min);
                let hi = intervals
                    .iter()
                    .map(|i| i[1])
                    .fold(f64::NEG_INFINITY, f64::max);
                vec![(lo, hi)]
            }
            ShapeKind::Circle { center, radius } | ShapeKind::Disk { center, radius, .. } => {
                center.iter().map(|c| (c - radius, c + radius)).collect()
            }
            ShapeKind::TwoCircles { first, second, .. } => (0..2)
                .map(|k| {
                    (
                        (first.center[k] - first.radius).min(second.center[k] - second.radius),
                        (first.center[k] + first.radius).max(second.center[k] + second.radius),
                    )
                })
                .collect(),
            ShapeKind::Triangle { vertices } => (0..2)
                .map(|k| {
                    let c = vertices.iter().map(|v| v[k]);
                    (
                        c.clone().fold(f64::INFINITY, f64::min),
                        c.fold(f64::NEG_INFINITY, f64::max),
                    )
                })
                .collect(),
            ShapeKind::Square { center, side } => center
                .iter()
                .map(|c| (c - side / 2.0, c + side / 2.0))
                .collect(),
            ShapeKind::CubeSkeleton {
                center,
                edge_length,
            } => center
                .iter()
                .map(|c| (c - edge_length / 2.0, c + edge_length / 2.0))
                .collect(),
            ShapeKind::Union { parts, .. } => {
                let dim = self.ambient_dim();
                let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
                for p in parts {
                    for (o, b) in out.iter_mut().zip(p.bounds()) {
                        o.0 = o.0.min(b.0);
                        o.1 = o.1.max(b.1);
                    }
                }
                out
            }
        }
    }

    fn validate(&self, sample_count: usize) -> Result<(), PointCloudError> {
        let bad = |msg: String| Err(PointCloudError::InvalidShape(msg));
        match self {
            ShapeKind::Intervals1d { intervals } => {
                if intervals.is_empty() {
                    return bad("no intervals".into());
                }
                let mut sorted = intervals.clone();
                sorted.sort_by(|a, b| a[0].total_cmp(&b[0]));
                for w in sorted.windows(2) {
                    if w[0][1] >= w[1][0] {
                        return bad("intervals overlap".into());
                    }
                }
                if intervals.iter().any(|[a, b]| !(a < b)) {
                    return bad("interval with nonpositive length".into());
                }
            }
            ShapeKind::Circle { radius, .. } if !(*radius > 0.0) => {
                return bad("circle radius must be positive".into())
            }
            ShapeKind::TwoCircles {
                first,
                second,
                first_fraction,
            } => {
                if !(first.radius > 0.0 && second.radius > 0.0) {
                    return bad("circle radius must be positive".into());
                }
                if let Some(f) = first_fraction {
                    if !(0.0..=1.0).contains(f) {
                        return bad("first_fraction outside [0, 1]".into());
                    }
                }
            }
            ShapeKind::Disk {
                radius,
                inner_radius,
                ..
            } if !(*radius > 0.0 && *inner_radius >= 0.0 && inner_radius < radius) => {
                return bad("disk needs 0 <= inner_radius < radius".into())
            }
            ShapeKind::Triangle { vertices } if !(triangle_area(vertices) > 0.0) => {
                return bad("degenerate triangle".into())
            }
            ShapeKind::Square { side, .. } if !(*side > 0.0) => {
                return bad("square side must be positive".into())
            }
            ShapeKind::CubeSkeleton { edge_length, .. } => {
                if !(*edge_length > 0.0) {
                    return bad("cube edge length must be positive".into());
                }
                if !sample_count.is_multiple_of(12) {
                    return bad(format!(
                        "cube skeleton needs a multiple of 12 samples, got {sample_count}"
                    ));
                }
            }
            ShapeKind::Union { parts, fractions } => {
                if parts.is_empty() {
                    return bad("empty union".into());
                }
                let dim = parts[0].ambient_dim();
                if parts.iter().any(|p| p.ambient_dim() != dim) {
                    return bad("union parts live in different dimensions".into());
                }
                for p in parts {
                    p.validate(0)?;
                }
                match fractions {
                    Some(f) => {
                        if f.len() != parts.len() || f.iter().any(|x| !(*x >= 0.0)) {
                            return bad("fractions must be nonnegative, one per part".into());
                        }
                    }
                    None => {
                        let idim = parts[0].measure().0;
                        if parts.iter().any(|p| p.measure().0 != idim) {
                            return bad("mixed intrinsic dimensions need explicit fractions".into());
                        }
                    }
                }
            }
            _ => {}
        }
        for (lo, hi) in self.bounds() {
            if !(lo > -1.0 && hi < 1.0) {
                return bad(format!("support [{lo}, {hi}] leaves the open box (-1, 1)"));
            }
        }
        Ok(())
    }

    fn sample_into(&self, count: usize, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        match self {
            ShapeKind::Intervals1d { intervals } => {
                let sizes: Vec<f64> = intervals.iter().map(|[a, b]| b - a).collect();
                for (iv, k) in intervals.iter().zip(allocate(count, &sizes)) {
                    for _ in 0..k {
                        out.push(rng.random_range(iv[0]..=iv[1]));
                    }
                }
            }
            ShapeKind::Circle { center, radius } => {
                sample_circle(center, *radius, count, rng, out);
            }
            ShapeKind::TwoCircles {
                first,
                second,
                first_fraction,
            } => {
                let share = match first_fraction {
                    Some(f) => vec![*f, 1.0 - f],
                    None => vec![first.radius, second.radius],
                };
                let alloc = allocate(count, &share);
                sample_circle(&first.center, first.radius, alloc[0], rng, out);
                sample_circle(&second.center, second.radius, alloc[1], rng, out);
            }
            ShapeKind::Disk {
                center,
                radius,
                inner_radius,
            } => {
                let (r0, r1) = (inner_radius * inner_radius, radius * radius);
                for _ in 0..count {
                    let r = rng.random_range(r0..=r1).sqrt();
                    let t = rng.random_range(0.0..2.0 * PI);
                    out.push(center[0] + r * t.cos());
                    out.push(center[1] + r * t.sin());
                }
            }
            ShapeKind::Triangle {
                vertices: [a, b, c],
            } => {
                for _ in 0..count {
                    let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
                    if u + v > 1.0 {
                        u = 1.0 - u;
                        v = 1.0 - v;
                    }
                    for k in 0..2 {
                        out.push(a[k] + u * (b[k] - a[k]) + v * (c[k] - a[k]));
                    }
                }
            }
            ShapeKind::Square { center, side } => {
                for _ in 0..count {
                    for c in center {
                        out.push(c + side * (rng.random::<f64>() - 0.5));
                    }
                }
            }
            ShapeKind::CubeSkeleton {
                center,
                edge_length,
            } => {
                let per_edge = count / 12;
                let h = edge_length / 2.0;
                for axis in 0..3 {
                    let (o1, o2) = ((axis + 1) % 3, (axis + 2) % 3);
                    for (s1, s2) in [(-h, -h), (-h, h), (h, -h), (h, h)] {
                        for i in 0..per_edge {
                            let t = -h + edge_length * (i as f64 + 0.5) / per_edge as f64;
                            let mut p = [0.0; 3];
                            p[axis] = center[axis] + t;
                            p[o1] = center[o1] + s1;
                            p[o2] = center[o2] + s2;
                            out.extend_from_slice(&p);
                        }
                    }
                }
            }
            ShapeKind::Union { parts, fractions } => {
                let shares = fractions
                    .clone()
                    .unwrap_or_else(|| parts.iter().map(|p| p.measure().1).collect());
                for (part, k) in parts.iter().zip(allocate(count, &shares)) {
                    part.sample_into(k, rng, out);
                }
            }
        }
    }
}

fn sample_circle(
    center: &[f64; 2],
    radius: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<f64>,
) {
    for _ in 0..count {
        let t = rng.random_range(0.0..2.0 * PI);
        out.push(center[0] + radius * t.cos());
        out.push(center[1] + radius * t.sin());
    }
}

fn triangle_area([a, b, c]: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
}

/// Largest-remainder split of `total` proportionally to `shares`.
fn allocate(total: usize, shares: &[f64]) -> Vec<usize> {
    let sum: f64 = shares.iter().sum();
    if sum <= 0.0 {
        let mut out = vec![0; shares.len()];
        if let Some(first) = out.first_mut() {
            *first = total;
        }
        return out;
    }
    let exact: Vec<f64> = shares.iter().map(|s| total as f64 * s / sum).collect();
    let mut out: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = out.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (exact[i] - exact[i].floor(), exact[j] - exact[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        out[i] += 1;
    }
    out
}

/// Draws the clean sample, perturbs it, then appends uniform outliers.
pub fn sample_shape(spec: &ShapeSpec) -> Result<EmpiricalMeasure, PointCloudError> {
    let noise = &spec.noise;
    if spec.sample_count == 0 && noise.uniform_count == 0 {
        return Err(PointCloudError::InvalidShape(
            "empty sample: sample_count and uniform_count are both zero".into(),
        ));
    }
    if !(noise.gaussian_sigma >= 0.0 && noise.gaussian_sigma.is_finite()) {
        return Err(PointCloudError::InvalidShape(format!(
            "gaussian sigma must be finite and nonnegative, got {}",
            noise.gaussian_sigma
        )));
    }
    spec.kind.validate(spec.sample_count)?;

    let dim = spec.kind.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(noise.rng_seed);
    let mut coords = Vec::with_capacity((spec.sample_count + noise.uniform_count) * dim);
    spec.kind
        .sample_into(spec.sample_count, &mut rng, &mut coords);

    if noise.gaussian_sigma > 0.0 {
        let normal = Normal::new(0.0, noise.gaussian_sigma)
            .map_err(|e| PointCloudError::InvalidShape(e.to_string()))?;
        for c in coords.iter_mut() {
            *c = (*c + normal.sample(&mut rng)).clamp(-1.0, 1.0);
        }
    }
    for _ in 0..noise.uniform_count * dim {
        coords.push(rng.random_range(-1.0..=1.0));
    }
    let len = coords.len() / dim;
    EmpiricalMeasure::from_flat(dim, coords, vec![1.0 / len as f64; len])
}
