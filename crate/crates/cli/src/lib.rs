//! Scenario runner for the weighted Koppelman operators.
//!
//! Each scenario is a named experiment over `koppelman-core` that produces a
//! [`RunReport`]: the configuration echo, a list of checks with their stored
//! tolerances, scenario data, optional plot rows, and timings kept apart
//! from everything else so that repeated runs compare byte for byte.

pub mod config;
pub mod error;
pub mod report;
mod scenarios;

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::{emit_plotdata, Check, PlotRow, Relation, RunReport};
pub use scenarios::run;
