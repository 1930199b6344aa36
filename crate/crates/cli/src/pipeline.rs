use std::time::Instant;

use cdpers::christoffel::{BasisSpec, ChristoffelModel};
use cdpers::grid_complex::{lower_star, FreudenthalComplex, DEFAULT_SIMPLEX_CAP};
use cdpers::persistence::{compute_persistence, PersistenceDiagram};
use cdpers::pointcloud::{
    distance_function_many, read_measure, sample_shape, EmpiricalMeasure, PointCloudError,
};
use serde::Serialize;

use crate::config::{FiltrationKind, Input, RunConfig};
use crate::error::CliError;

/// Wall-clock seconds per pipeline stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub sample: f64,
    pub fit: f64,
    pub sweep: f64,
    pub reduce: f64,
    pub metrics: f64,
    pub total: f64,
}

impl Timings {
    pub fn stage_sum(&self) -> f64 {
        self.sample + self.fit + self.sweep + self.reduce + self.metrics
    }

    pub fn add(&mut self, other: &Timings) {
        self.sample += other.sample;
        self.fit += other.fit;
        self.sweep += other.sweep;
        self.reduce += other.reduce;
        self.metrics += other.metrics;
        self.total += other.total;
    }
}

/// Seconds elapsed since the last lap.
pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Self(Instant::now())
    }

    pub fn lap(&mut self) -> f64 {
        let now = Instant::now();
        let secs = now.duration_since(self.0).as_secs_f64();
        self.0 = now;
        secs
    }
}

/// Summary of a fitted Christoffel polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub basis_size: usize,
    pub eps: f64,
    /// `log₁₀` of the grid maximum of the polynomial.
    pub log_sup_norm: f64,
}

/// Loads or samples the cloud named by the config.
pub fn load_input(config: &RunConfig) -> Result<EmpiricalMeasure, CliError> {
    match &config.input {
        Input::Path(path) => read_measure(path, None).map_err(|e| match e {
            PointCloudError::Io(io) => CliError::io(path, io),
            PointCloudError::Parse(msg) => CliError::parse(path, msg),
            other => other.into(),
        }),
        Input::Shape(spec) => {
            let mut spec = spec.clone();
            if let Some(seed) = config.rng_seed {
                spec.noise.rng_seed = seed;
            }
            Ok(sample_shape(&spec)?)
        }
    }
}

/// Diagram of one filtration of `measure`, with per-stage timings.
#[derive(Debug, Clone)]
pub struct Computed {
    pub diagram: PersistenceDiagram,
    pub model: Option<ModelSummary>,
    pub timings: Timings,
}

/// Fits (if needed), sweeps the vertex function over the grid and reduces.
pub fn compute_diagram(
    config: &RunConfig,
    measure: &EmpiricalMeasure,
) -> Result<Computed, CliError> {
    config.validate()?;
    let n = measure.dim();
    let top = config.homology_degree(n)?;
    let mut timings = Timings::default();
    let mut clock = Stopwatch::start();

    let model = match config.kind {
        FiltrationKind::Christoffel => {
            let basis = BasisSpec::new(n, config.degree, config.basis)?;
            Some(ChristoffelModel::fit(measure, &basis, config.eps)?)
        }
        FiltrationKind::DistanceFunction => None,
    };
    timings.fit = clock.lap();

    let complex = FreudenthalComplex::skeleton(n, config.resolution, top + 1, DEFAULT_SIMPLEX_CAP)?;
    let coords = complex.vertex_coords_flat();
    let values = match &model {
        Some(model) => model.log_eval_many(&coords),
        None => distance_function_many(measure.coords(), n, &coords),
    };
    drop(coords);
    let filtration = lower_star(&complex, &values)?;
    timings.sweep = clock.lap();

    let mut diagram = compute_persistence(&filtration, top);
    diagram.meta.kind = Some(config.kind.name().to_string());
    if config.kind == FiltrationKind::Christoffel {
        diagram.meta.basis_degree = Some(config.degree);
    }
    timings.reduce = clock.lap();
    timings.total = timings.fit + timings.sweep + timings.reduce;

    let model = model.map(|m| ModelSummary {
        basis_size: m.basis().len(),
        eps: m.eps(),
        log_sup_norm: m.log_sup_norm(),
    });
    Ok(Computed {
        diagram,
        model,
        timings,
    })
}

/// Loads the input and computes its diagram.
pub fn run(config: &RunConfig) -> Result<(EmpiricalMeasure, Computed), CliError> {
    let mut clock = Stopwatch::start();
    let measure = load_input(config)?;
    let sample = clock.lap();
    let mut computed = compute_diagram(config, &measure)?;
    computed.timings.sample = sample;
    computed.timings.total += sample;
    Ok((measure, computed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cdpers::pointcloud::{NoiseSpec, ShapeKind, ShapeSpec};

    fn circle(seed: u64) -> RunConfig {
        let spec = ShapeSpec {
            kind: ShapeKind::Circle {
                center: [0.0, 0.0],
                radius: 0.5,
            },
            sample_count: 200,
            noise: NoiseSpec {
                gaussian_sigma: 0.02,
                rng_seed: seed,
                ..Default::default()
            },
        };
        RunConfig::new(Input::Shape(spec), 4, 40)
    }

    #[test]
    fn circle_has_one_loop() {
        let (_, out) = run(&circle(1)).unwrap();
        let d = &out.diagram;
        assert_eq!(d.significant_count(0, 3.0), 1);
        assert_eq!(d.significant_count(1, 3.0), 1);
        assert_eq!(d.meta.basis_degree, Some(4));
        assert!(out.model.is_some());
    }

    #[test]
    fn seed_override_changes_sample() {
        let a = run(&circle(1)).unwrap().0;
        let mut cfg = circle(1);
        cfg.rng_seed = Some(2);
        let b = run(&cfg).unwrap().0;
        assert_ne!(a.coords(), b.coords());
    }

    #[test]
    fn exact_circle_is_degenerate_without_regularization() {
        let mut cfg = circle(1);
        if let Input::Shape(s) = &mut cfg.input {
            s.noise.gaussian_sigma = 0.0;
        }
        let err = run(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        cfg.eps = 1e-8;
        assert!(run(&cfg).is_ok());
    }
}
