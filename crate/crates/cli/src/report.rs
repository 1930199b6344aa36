use cdpers::diagram_metrics::display_ratio;
use cdpers::persistence::PersistenceDiagram;
use serde::{Serialize, Serializer};

use crate::config::RunConfig;
use crate::pipeline::{ModelSummary, Timings};

/// Serializes infinite or NaN values as `null`.
pub fn finite_or_null<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedDiagram {
    pub name: String,
    pub diagram: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSummary>,
}

impl NamedDiagram {
    pub fn new(name: &str, diagram: &PersistenceDiagram, model: Option<ModelSummary>) -> Self {
        Self {
            name: name.to_string(),
            diagram: diagram.to_json_value(),
            model,
        }
    }
}

/// A derived number together with what it was derived from.
#[derive(Debug, Clone, Serialize)]
pub struct Statistic {
    pub name: String,
    /// Diagram name(s) and parameters the value was computed from.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology_degree: Option<usize>,
    /// `null` when infinite.
    #[serde(serialize_with = "finite_or_null")]
    pub value: f64,
    pub display: String,
}

impl Statistic {
    pub fn new(name: &str, source: String, homology_degree: Option<usize>, value: f64) -> Self {
        let display = if value.fract() == 0.0 && value.abs() < 1e15 {
            format!("{value}")
        } else {
            display_ratio(value)
        };
        Self {
            name: name.to_string(),
            source,
            homology_degree,
            value,
            display,
        }
    }
}

/// Everything a command produced: config echo, diagrams, statistics and
/// stage timings.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub command: String,
    pub configs: Vec<RunConfig>,
    pub diagrams: Vec<NamedDiagram>,
    pub statistics: Vec<Statistic>,
    pub timings: Timings,
}

impl ExperimentReport {
    pub fn statistic(&self, name: &str, homology_degree: usize) -> Option<&Statistic> {
        self.statistics
            .iter()
            .find(|s| s.name == name && s.homology_degree == Some(homology_degree))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

/// Short human-readable label for a run.
pub fn describe(config: &RunConfig) -> String {
    let mut s = format!("{} m={}", config.kind.name(), config.resolution);
    if config.kind == crate::config::FiltrationKind::Christoffel {
        s.push_str(&format!(" d={}", config.degree));
        if config.eps > 0.0 {
            s.push_str(&format!(" eps={:e}", config.eps));
        }
    }
    s
}
