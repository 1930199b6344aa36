use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use cdpers::diagram_metrics::{bottleneck, display_ratio, signal_to_noise, Matching, MetricsError};
use cdpers::grid_complex::pl_error_bound;
use cdpers::persistence::PersistenceDiagram;
use cdpers::pointcloud::{read_measure, wasserstein, PointCloudError, ShapeSpec};
use serde::Serialize;

use crate::config::{FiltrationKind, Input, RunConfig};
use crate::error::CliError;
use crate::pipeline::{compute_diagram, load_input, run, Computed, Stopwatch, Timings};
use crate::plot::render_svg;
use crate::report::{describe, finite_or_null, ExperimentReport, NamedDiagram, Statistic};

/// Minimum ratio between consecutive interval lengths for the longer ones
/// to count as signal.
pub const GAP_FACTOR: f64 = 3.0;

/// Per-degree statistics of one diagram.
pub fn diagram_statistics(name: &str, diagram: &PersistenceDiagram) -> Vec<Statistic> {
    let mut out = Vec::new();
    for (p, list) in diagram.degrees().iter().enumerate() {
        let significant = diagram.significant_count(p, GAP_FACTOR);
        out.push(Statistic::new(
            "interval_count",
            name.to_string(),
            Some(p),
            list.len() as f64,
        ));
        out.push(Statistic::new(
            "significant_count",
            format!("{name}, gap factor {GAP_FACTOR}"),
            Some(p),
            significant as f64,
        ));
        let infinite = list.iter().filter(|i| i.is_infinite()).count();
        let signal = significant.saturating_sub(infinite);
        if signal > 0 {
            if let Ok(r) = signal_to_noise(diagram, p, signal) {
                out.push(Statistic::new(
                    "signal_to_noise",
                    format!("{name}, k={signal}"),
                    Some(p),
                    r,
                ));
            }
        }
    }
    out
}

fn write_with<F>(path: &Path, f: F) -> Result<(), CliError>
where
    F: FnOnce(BufWriter<File>) -> Result<(), CliError>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    f(BufWriter::new(file))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_diagram_outputs(config: &RunConfig, diagram: &PersistenceDiagram) -> Result<(), CliError> {
    let o = &config.outputs;
    if let Some(path) = &o.diagram_json {
        write_with(path, |w| {
            diagram
                .write_json(w)
                .map_err(|e| CliError::parse(path, e.to_string()))
        })?;
    }
    if let Some(path) = &o.diagram_csv {
        write_with(path, |w| {
            diagram
                .write_csv(w)
                .map_err(|e| CliError::parse(path, e.to_string()))
        })?;
    }
    if let Some(path) = &o.svg {
        write_text(path, &render_svg(diagram, &describe(config)))?;
    }
    Ok(())
}

/// Writes the report to the configured path, if any.
pub fn save_report(config: &RunConfig, report: &ExperimentReport) -> Result<(), CliError> {
    if let Some(path) = &config.outputs.report {
        write_text(path, &report.to_json())?;
    }
    Ok(())
}

/// Cloud → vertex function → lower-star filtration → diagram, with outputs.
pub fn cmd_compute(config: &RunConfig) -> Result<(ExperimentReport, PersistenceDiagram), CliError> {
    let mut wall = Stopwatch::start();
    let (_, computed) = run(config)?;
    let Computed {
        diagram,
        model,
        mut timings,
    } = computed;

    let mut clock = Stopwatch::start();
    let name = describe(config);
    let statistics = diagram_statistics(&name, &diagram);
    write_diagram_outputs(config, &diagram)?;
    timings.metrics = clock.lap();
    timings.total = wall.lap();

    let report = ExperimentReport {
        command: "compute".into(),
        configs: vec![config.clone()],
        diagrams: vec![NamedDiagram::new(&name, &diagram, model)],
        statistics,
        timings,
    };
    save_report(config, &report)?;
    Ok((report, diagram))
}

/// Runs two filtrations of the same cloud on the same grid and compares
/// their diagrams degree by degree.
pub fn cmd_compare(a: &RunConfig, b: &RunConfig) -> Result<ExperimentReport, CliError> {
    if a.input != b.input || a.rng_seed != b.rng_seed {
        return Err(CliError::Config(
            "compared runs must use the same cloud".into(),
        ));
    }
    if a.resolution != b.resolution {
        return Err(CliError::Config(format!(
            "compared runs must use the same grid, got m={} and m={}",
            a.resolution, b.resolution
        )));
    }
    let mut wall = Stopwatch::start();
    let measure = load_input(a)?;
    let sample = wall.lap();
    let first = compute_diagram(a, &measure)?;
    let second = compute_diagram(b, &measure)?;

    let mut clock = Stopwatch::start();
    let (name_a, name_b) = (format!("A: {}", describe(a)), format!("B: {}", describe(b)));
    let mut statistics = diagram_statistics(&name_a, &first.diagram);
    statistics.extend(diagram_statistics(&name_b, &second.diagram));
    let degrees = first
        .diagram
        .degrees()
        .len()
        .min(second.diagram.degrees().len());
    for p in 0..degrees {
        let (d, _) = bottleneck(&first.diagram, &second.diagram, p);
        statistics.push(Statistic::new(
            "bottleneck",
            format!("{name_a} vs {name_b}"),
            Some(p),
            d,
        ));
    }
    write_diagram_outputs(a, &first.diagram)?;
    write_diagram_outputs(b, &second.diagram)?;

    let mut timings = Timings {
        sample,
        ..Default::default()
    };
    timings.add(&first.timings);
    timings.add(&second.timings);
    timings.metrics = clock.lap();
    timings.total = sample + wall.lap();

    let report = ExperimentReport {
        command: "compare".into(),
        configs: vec![a.clone(), b.clone()],
        diagrams: vec![
            NamedDiagram::new(&name_a, &first.diagram, first.model),
            NamedDiagram::new(&name_b, &second.diagram, second.model),
        ],
        statistics,
        timings,
    };
    save_report(a, &report)?;
    Ok(report)
}

/// A filtration choice in the signal-to-noise table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Method {
    pub kind: FiltrationKind,
    /// Polynomial degree; ignored for the distance function.
    pub degree: usize,
}

impl Method {
    pub fn label(&self) -> String {
        match self.kind {
            FiltrationKind::DistanceFunction => "distance-function".into(),
            FiltrationKind::Christoffel => format!("christoffel (d={})", self.degree),
        }
    }
}

/// Parameters of the signal-to-noise experiment.
#[derive(Debug, Clone)]
pub struct SnrOptions {
    /// Clean shape; its `uniform_count` and seed are replaced per run.
    pub base: ShapeSpec,
    pub methods: Vec<Method>,
    pub noise_levels: Vec<usize>,
    pub trials: usize,
    pub resolution: usize,
    /// Number of intervals expected to be signal.
    pub signal_count: usize,
    pub homology_degree: usize,
    pub eps: f64,
    /// Seed of the first trial; trial `t` uses `seed + t`.
    pub seed: u64,
}

/// Median signal-to-noise ratios per method and noise level.
#[derive(Debug, Clone, Serialize)]
pub struct SnrTable {
    pub methods: Vec<String>,
    pub noise_levels: Vec<usize>,
    pub trials: usize,
    /// `ratios[method][level][trial]`.
    pub ratios: Vec<Vec<Vec<f64>>>,
    /// `medians[method][level]`, infinite when the noise left no spurious
    /// interval.
    pub medians: Vec<Vec<f64>>,
    pub timings: Timings,
}

impl SnrTable {
    /// One row per method, one column per noise level; `0` is labelled
    /// `baseline`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        if self.trials == 1 {
            s.push_str("# single-run ratios, not medians\n");
        }
        s.push_str("uniform noise (M)");
        for m in &self.noise_levels {
            if *m == 0 {
                s.push_str(",baseline");
            } else {
                s.push_str(&format!(",{m}"));
            }
        }
        s.push('\n');
        for (label, row) in self.methods.iter().zip(&self.medians) {
            s.push_str(label);
            for v in row {
                s.push(',');
                s.push_str(&display_ratio(*v));
            }
            s.push('\n');
        }
        s
    }

    pub fn median(&self, method: usize, level: usize) -> f64 {
        self.medians[method][level]
    }
}

/// Median of a sample, averaging the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        let (a, b) = (v[n / 2 - 1], v[n / 2]);
        if a == b {
            a
        } else {
            (a + b) / 2.0
        }
    }
}

/// Ratio used in the table: fewer finite intervals than the signal count
/// means the signal was not recovered, scored 0.
fn snr_or_zero(diagram: &PersistenceDiagram, p: usize, k: usize) -> f64 {
    match signal_to_noise(diagram, p, k) {
        Ok(r) => r,
        Err(MetricsError::InsufficientIntervals { .. }) => 0.0,
        Err(MetricsError::ZeroSignalCount) => f64::NAN,
    }
}

/// Runs `trials` noisy samples per noise level and reports median ratios.
/// All methods see the same samples.
pub fn cmd_snr_table(opts: &SnrOptions) -> Result<SnrTable, CliError> {
    if opts.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    if opts.signal_count == 0 {
        return Err(CliError::Config("signal count must be at least 1".into()));
    }
    if opts.methods.is_empty() || opts.noise_levels.is_empty() {
        return Err(CliError::Config(
            "need at least one method and one noise level".into(),
        ));
    }
    let mut timings = Timings::default();
    let mut wall = Stopwatch::start();
    let nm = opts.methods.len();
    let nl = opts.noise_levels.len();
    let mut ratios = vec![vec![Vec::with_capacity(opts.trials); nl]; nm];
    for (li, &level) in opts.noise_levels.iter().enumerate() {
        for t in 0..opts.trials {
            let mut spec = opts.base.clone();
            spec.noise.uniform_count = level;
            spec.noise.rng_seed = opts.seed.wrapping_add(t as u64);
            for (mi, method) in opts.methods.iter().enumerate() {
                let mut cfg =
                    RunConfig::new(Input::Shape(spec.clone()), method.degree, opts.resolution);
                cfg.kind = method.kind;
                cfg.eps = opts.eps;
                cfg.max_homology_degree = Some(opts.homology_degree);
                let (_, out) = run(&cfg)?;
                let mut clock = Stopwatch::start();
                ratios[mi][li].push(snr_or_zero(
                    &out.diagram,
                    opts.homology_degree,
                    opts.signal_count,
                ));
                let mut t = out.timings;
                t.metrics = clock.lap();
                timings.add(&t);
            }
        }
    }
    let mut clock = Stopwatch::start();
    let medians = ratios
        .iter()
        .map(|row| row.iter().map(|r| median(r)).collect())
        .collect();
    timings.metrics += clock.lap();
    timings.total = wall.lap();
    Ok(SnrTable {
        methods: opts.methods.iter().map(Method::label).collect(),
        noise_levels: opts.noise_levels.clone(),
        trials: opts.trials,
        ratios,
        medians,
        timings,
    })
}

/// Bottleneck distances between diagrams at consecutive resolutions.
#[derive(Debug, Clone, Serialize)]
pub struct SweepStep {
    pub from: usize,
    pub to: usize,
    /// Distance per homology degree; `null` when infinite.
    pub per_degree: Vec<SweepValue>,
    /// Largest distance over all degrees.
    #[serde(serialize_with = "finite_or_null")]
    pub max: f64,
    /// Upper bound `L·2√n/m₁ + L·2√n/m₂` when a Lipschitz constant was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepValue(#[serde(serialize_with = "finite_or_null")] pub f64);

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub resolutions: Vec<usize>,
    pub steps: Vec<SweepStep>,
    pub timings: Timings,
}

/// Computes diagrams of one cloud at each resolution and the bottleneck
/// distance between consecutive ones.
pub fn cmd_resolution_sweep(
    config: &RunConfig,
    resolutions: &[usize],
    lipschitz: Option<f64>,
) -> Result<SweepReport, CliError> {
    if resolutions.len() < 2 {
        return Err(CliError::Config("need at least two resolutions".into()));
    }
    if resolutions.windows(2).any(|w| w[1] < w[0]) || resolutions[0] == 0 {
        return Err(CliError::Config(
            "resolutions must be positive and nondecreasing".into(),
        ));
    }
    if let Some(l) = lipschitz {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(CliError::Config(format!("invalid Lipschitz constant {l}")));
        }
    }
    let mut wall = Stopwatch::start();
    let measure = load_input(config)?;
    let mut timings = Timings {
        sample: wall.lap(),
        ..Default::default()
    };
    let mut diagrams = Vec::with_capacity(resolutions.len());
    for &m in resolutions {
        let mut cfg = config.clone();
        cfg.resolution = m;
        let out = compute_diagram(&cfg, &measure)?;
        timings.add(&out.timings);
        diagrams.push(out.diagram);
    }
    let mut clock = Stopwatch::start();
    let n = measure.dim();
    let steps = resolutions
        .windows(2)
        .zip(diagrams.windows(2))
        .map(|(ms, ds)| {
            let per_degree: Vec<f64> = (0..ds[0].degrees().len())
                .map(|p| bottleneck(&ds[0], &ds[1], p).0)
                .collect();
            SweepStep {
                from: ms[0],
                to: ms[1],
                max: per_degree.iter().copied().fold(0.0, f64::max),
                per_degree: per_degree.into_iter().map(SweepValue).collect(),
                bound: lipschitz.map(|l| pl_error_bound(l, n, ms[0]) + pl_error_bound(l, n, ms[1])),
            }
        })
        .collect();
    timings.metrics = clock.lap();
    timings.total = timings.sample + wall.lap();
    Ok(SweepReport {
        config: config.clone(),
        resolutions: resolutions.to_vec(),
        steps,
        timings,
    })
}

/// Reads a diagram file, JSON or CSV by extension.
pub fn load_diagram(path: &Path) -> Result<PersistenceDiagram, CliError> {
    let file = BufReader::new(File::open(path).map_err(|e| CliError::io(path, e))?);
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let parsed = if is_csv {
        PersistenceDiagram::read_csv(file)
    } else {
        PersistenceDiagram::read_json(file)
    };
    parsed.map_err(|e| CliError::parse(path, e.to_string()))
}

/// Renders a diagram file as SVG.
pub fn cmd_plot(diagram_path: &Path, output: &Path) -> Result<(), CliError> {
    let diagram = load_diagram(diagram_path)?;
    let title = diagram_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_text(output, &render_svg(&diagram, &title))
}

#[derive(Debug, Clone, Serialize)]
pub struct WassersteinResult {
    pub distance: f64,
    pub support_a: usize,
    pub support_b: usize,
}

/// Exact Wasserstein distance between two cloud files.
pub fn cmd_wasserstein(a: &Path, b: &Path) -> Result<WassersteinResult, CliError> {
    let load = |p: &Path| {
        read_measure(p, None).map_err(|e| match e {
            PointCloudError::Io(io) => CliError::io(p, io),
            PointCloudError::Parse(msg) => CliError::parse(p, msg),
            other => other.into(),
        })
    };
    let (ma, mb) = (load(a)?, load(b)?);
    let (distance, _) = wasserstein(&ma, &mb)?;
    Ok(WassersteinResult {
        distance,
        support_a: ma.len(),
        support_b: mb.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BottleneckResult {
    pub homology_degree: usize,
    #[serde(serialize_with = "finite_or_null")]
    pub distance: f64,
    pub matching: Matching,
}

/// Bottleneck distance per homology degree between two diagram files.
pub fn cmd_bottleneck(
    a: &Path,
    b: &Path,
    degree: Option<usize>,
) -> Result<Vec<BottleneckResult>, CliError> {
    let (da, db) = (load_diagram(a)?, load_diagram(b)?);
    let top = da.degrees().len().max(db.degrees().len());
    let degrees: Vec<usize> = match degree {
        Some(p) => vec![p],
        None => (0..top).collect(),
    };
    Ok(degrees
        .into_iter()
        .map(|p| {
            let (distance, matching) = bottleneck(&da, &db, p);
            BottleneckResult {
                homology_degree: p,
                distance,
                matching,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_examples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[1.0, f64::INFINITY]), f64::INFINITY);
        assert_eq!(median(&[f64::INFINITY, f64::INFINITY]), f64::INFINITY);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn single_trial_table_is_flagged() {
        let t = SnrTable {
            methods: vec!["a".into()],
            noise_levels: vec![0, 25],
            trials: 1,
            ratios: vec![vec![vec![f64::INFINITY], vec![2.0]]],
            medians: vec![vec![f64::INFINITY, 2.0]],
            timings: Timings::default(),
        };
        let csv = t.to_csv();
        assert!(csv.starts_with("# single-run"));
        assert!(csv.contains("uniform noise (M),baseline,25\n"));
        assert!(csv.contains("a,≫ 10,2.0\n"));
    }
}
