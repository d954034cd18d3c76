//! Config-driven experiments, metric reports and plots for the `morl`
//! toolkit. The `morl` binary is a thin wrapper over this crate.

pub mod config;
pub mod error;
pub mod metrics;
pub mod plot;
pub mod run;

pub use config::{load, parse, seed_from_env, ExperimentConfig, MetricName};
pub use error::{CliError, Result};
pub use metrics::{run_metrics, MetricsReport, MetricsRequest};
pub use plot::plot;
pub use run::{execute, run};
