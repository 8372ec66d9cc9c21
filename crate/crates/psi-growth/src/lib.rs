//! Command-line companion of `psi-growth-core`: configuration files, a thread-pool
//! executor, on-disk formats and the experiment runner.

pub mod config;
pub mod exec;
pub mod formats;
pub mod runner;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use exec::Parallel;
pub use runner::{run, Manifest, Overrides, RunError};
