//! Configuration, scenario pipelines and file outputs for the `nvmag`
//! command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod units;

pub use config::{RunConfig, Scenario};
pub use error::{CliError, CliResult, ErrorRecord};
pub use run::{run, RunManifest, RunOptions};
