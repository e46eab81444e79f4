//! Benchmark harness: configuration, experiment runs and their outputs.

pub mod compare;
pub mod config;
pub mod dump;
pub mod run;
pub mod table;

pub use compare::compare;
pub use config::{ExampleId, GridMode, RunConfig};
pub use run::{convergence_table, run, simulate, RunSummary, SeriesRow, Snapshot, Trajectory};
pub use table::{emit_table, TableRow};
