//! Command-line front end for `cdpers`: end-to-end pipeline runs,
//! experiment harnesses, reports and SVG plots.

pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod plot;
pub mod presets;
pub mod report;

pub use commands::{
    cmd_bottleneck, cmd_compare, cmd_compute, cmd_plot, cmd_resolution_sweep, cmd_snr_table,
    cmd_wasserstein, Method, SnrOptions, SnrTable, SweepReport, GAP_FACTOR,
};
pub use config::{FiltrationKind, Input, Outputs, Overrides, RunConfig};
pub use error::{exit_code, CliError};
pub use pipeline::Timings;
pub use report::{ExperimentReport, Statistic};
