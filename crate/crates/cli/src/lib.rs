//! Scenario configuration, presets and report generation for the
//! `blockfade` channel simulator.

pub mod config;
pub mod emit;
pub mod error;
pub mod preset;
pub mod run;
mod svg;

pub use config::{parse_config, ConfigError, OutputKind, ScenarioConfig};
pub use emit::Artifact;
pub use error::CliError;
pub use preset::Preset;
pub use run::{compute_statistics, run_scenario, Report, Statistics};
