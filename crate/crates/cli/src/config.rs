use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cdpers::christoffel::BasisFamily;
use cdpers::pointcloud::ShapeSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Where the point cloud comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Input {
    /// A cloud file, CSV or JSON by extension.
    Path(PathBuf),
    /// A synthetic shape sampled on the fly.
    Shape(ShapeSpec),
}

/// Which function is swept over the grid vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiltrationKind {
    /// `log₁₀ Λ`, the log of the Christoffel polynomial.
    #[default]
    Christoffel,
    /// Euclidean distance to the cloud, the grid analogue of Čech persistence.
    DistanceFunction,
}

impl FiltrationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Christoffel => "christoffel",
            Self::DistanceFunction => "distance-function",
        }
    }
}

impl FromStr for FiltrationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "christoffel" => Ok(Self::Christoffel),
            "distance-function" | "distance" => Ok(Self::DistanceFunction),
            _ => Err(format!(
                "unknown filtration kind {s:?}; expected christoffel or distance-function"
            )),
        }
    }
}

/// Optional output files written by a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram_json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

/// Parameters of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: Input,
    /// Polynomial degree `d` of the Christoffel polynomial.
    pub degree: usize,
    /// Grid resolution `m`: the box is cut into `m^n` cells.
    pub resolution: usize,
    /// Diagonal regularization added to the moment matrix.
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub kind: FiltrationKind,
    #[serde(default)]
    pub basis: BasisFamily,
    /// Highest homology degree computed; defaults to the ambient dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_homology_degree: Option<usize>,
    #[serde(default)]
    pub outputs: Outputs,
    /// Overrides the seed of a sampled shape.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub degree: Option<usize>,
    pub resolution: Option<usize>,
    pub eps: Option<f64>,
    pub kind: Option<FiltrationKind>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// A config with default options for the given input.
    pub fn new(input: Input, degree: usize, resolution: usize) -> Self {
        Self {
            input,
            degree,
            resolution,
            eps: 0.0,
            kind: FiltrationKind::default(),
            basis: BasisFamily::default(),
            max_homology_degree: None,
            outputs: Outputs::default(),
            rng_seed: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies command-line overrides; `--out` sets the diagram JSON path.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = o.degree {
            self.degree = d;
        }
        if let Some(m) = o.resolution {
            self.resolution = m;
        }
        if let Some(e) = o.eps {
            self.eps = e;
        }
        if let Some(k) = o.kind {
            self.kind = k;
        }
        if let Some(s) = o.seed {
            self.rng_seed = Some(s);
        }
        if let Some(p) = &o.out {
            self.outputs.diagram_json = Some(p.clone());
        }
    }

    /// Ambient dimension, when known without reading the input file.
    pub fn shape_dim(&self) -> Option<usize> {
        match &self.input {
            Input::Shape(s) => Some(s.kind.ambient_dim()),
            Input::Path(_) => None,
        }
    }

    /// Checks parameter ranges that do not depend on the cloud.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.resolution == 0 {
            return Err(CliError::Config("resolution must be at least 1".into()));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(CliError::Config(format!(
                "eps must be finite and nonnegative, got {}",
                self.eps
            )));
        }
        Ok(())
    }

    /// Highest homology degree for a cloud of dimension `n`.
    pub fn homology_degree(&self, n: usize) -> Result<usize, CliError> {
        match self.max_homology_degree {
            Some(p) if p > n => Err(CliError::Config(format!(
                "max_homology_degree {p} exceeds the ambient dimension {n}"
            ))),
            Some(p) => Ok(p),
            None => Ok(n),
        }
    }
}
