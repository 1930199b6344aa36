use std::path::PathBuf;

use cdpers::christoffel::ChristoffelError;
use cdpers::grid_complex::GridError;
use cdpers::persistence::PersistenceError;
use cdpers::pointcloud::PointCloudError;
use thiserror::Error;

/// Process exit codes, one per error class.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const DEGENERATE: i32 = 3;
    pub const RESOURCE: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    PointCloud(#[from] PointCloudError),
    #[error(transparent)]
    Christoffel(#[from] ChristoffelError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Self::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Exit code for this error class. Malformed input files count as I/O
    /// failures; invalid parameters count as configuration errors.
    pub fn exit_code(&self) -> i32 {
        use exit_code::*;
        match self {
            Self::Config(_) => CONFIG,
            Self::Io { .. } | Self::Parse { .. } => IO,
            Self::PointCloud(e) => point_cloud_code(e),
            Self::Christoffel(ChristoffelError::DegenerateSampleSet { .. }) => DEGENERATE,
            Self::Christoffel(ChristoffelError::PointCloud(e)) => point_cloud_code(e),
            Self::Christoffel(_) => CONFIG,
            Self::Grid(GridError::ResourceLimit { .. }) => RESOURCE,
            Self::Grid(_) => CONFIG,
            Self::Persistence(PersistenceError::InvalidFiltration(_)) => CONFIG,
            Self::Persistence(_) => IO,
        }
    }
}

fn point_cloud_code(e: &PointCloudError) -> i32 {
    match e {
        PointCloudError::Io(_) | PointCloudError::Parse(_) => exit_code::IO,
        _ => exit_code::CONFIG,
    }
}
