//! Experiment harness for the `symsens` estimators: configuration,
//! execution on a fixed-size worker pool, JSON/CSV reports and replay checks.
//!
//! Results are a pure function of the resolved configuration and seed; the
//! worker count only changes how fast they are produced.

mod config;
mod error;
mod replay;
mod run;
pub mod selftest;

pub use config::{parse_partition, parse_system, Command, DeltaGrid, ExperimentConfig, Format, DEFAULT_SEED};
pub use error::{HarnessError, Result};
pub use replay::{load_report, replay_check};
pub use run::{run, summary, ExperimentReport, TOOL};
