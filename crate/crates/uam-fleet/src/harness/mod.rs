//! Experiment orchestration: configuration, batch execution, reporting.

mod config;
mod pipeline;
mod plot;

pub use config::{ExperimentConfig, ScheduleSource, Scenario, SweepSpec};
pub use pipeline::{run_pipeline, AggregateReport, ProfileRow};
pub use plot::emit_plots;
