//! Reproducible verification experiments. Each run is a pure function of
//! its parameters and seed and returns an [`ExperimentReport`].

mod experiments;
mod report;
pub mod tolerances;

pub use experiments::*;
pub use report::{Check, ExperimentReport, Metric};
