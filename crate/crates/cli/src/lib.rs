//! Command-line scenario runner for `cusplab`: each scenario computes one
//! family of exact solutions, classifies its singularity, and writes
//! `<output>/<scenario>/curves.json` and `report.json`.

pub mod args;
pub mod config;
pub mod error;
pub mod run;
pub mod scenarios;

pub use config::{Format, Params, Scenario, ScenarioConfig};
pub use error::{CliError, Result};
pub use run::{run_scenario, RunReport};
pub use scenarios::classify_file;
