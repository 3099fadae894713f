//! Experiment harness for the GMAB solver: multi-run traces, percentile
//! bands, parameter sweeps, per-iteration runtime and final-selection
//! comparisons, all written as CSV.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fsc;
pub mod oracle;
pub mod runtime;
pub mod sweep;

pub use config::{ExperimentConfig, ProblemSpec, RawOptions};
pub use error::BenchError;
pub use experiment::{run_experiment, ExperimentOutput, SummaryRow, TraceRow};
