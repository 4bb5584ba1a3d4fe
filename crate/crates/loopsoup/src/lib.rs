//! Experiment harness for `loopsoup-core`: file formats, reports and the
//! commands behind the `loopsoup` binary.

pub mod experiments;
pub mod formats;
pub mod report;
pub mod spec;

pub use experiments::run;
pub use report::{Check, Report, RunManifest};
pub use spec::{Command, ExperimentSpec};
