//! Scenario driver: parse a JSON config, sweep parameters, invoke the
//! library, and write deterministic plot-ready series.

pub mod config;
pub mod fit;
pub mod output;
pub mod run;

pub use config::{MassParam, Numerics, ScenarioConfig, ScenarioKind, Sweep, TimeGrid};
pub use fit::{fit_decay, FitModel, FitReport};
pub use run::{run, run_config_file, RunOptions, RunSummary};

use thiserror::Error;

/// Runner-level failures, mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum ScenarioError {
    /// Unusable configuration or parameters (exit 2).
    #[error("{0}")]
    Config(String),
    /// Health thresholds exceeded in strict mode (exit 3).
    #[error("{0}")]
    Unhealthy(String),
    /// Filesystem trouble (exit 2).
    #[error("{0}")]
    Io(String),
}

impl ScenarioError {
    pub fn config(message: impl Into<String>) -> Self {
        Self::Config(message.into())
    }

    pub fn unhealthy(message: impl Into<String>) -> Self {
        Self::Unhealthy(message.into())
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::Io(message.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Unhealthy(_) => "numerics_unhealthy",
            Self::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Unhealthy(_) => 3,
        }
    }
}

impl From<crate::Error> for ScenarioError {
    fn from(e: crate::Error) -> Self {
        ScenarioError::Config(e.to_string())
    }
}
