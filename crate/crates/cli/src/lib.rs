//! Library surface of the experiment runner: config parsing, the named
//! experiments, and deterministic report emission.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{parse_smoothness, ConfigError, ExperimentConfig, EXPERIMENTS};
pub use experiments::{run_experiment, RunOutput, SummaryRow};
pub use report::{emit_report, render_csv, CSV_HEADER};
