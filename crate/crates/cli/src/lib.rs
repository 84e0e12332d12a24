//! Experiment runner for `multirot`: JSON configs in, CSV/JSON/SVG artifacts out.

pub mod build;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use output::Artifacts;
pub use run::run_config;
pub use verify::verify_theorem;
