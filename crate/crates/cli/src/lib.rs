//! Scenario runner behind the `jcm` binary: configuration, the scenario
//! registry, data and manifest output, plot scripts, predictions and the
//! engine cross-checks.

pub mod config;
pub mod output;
pub mod predict;
pub mod run;
pub mod scenarios;
pub mod verify;

pub use config::{Model, Overrides, ScenarioConfig};
pub use run::{run_scenario, RunManifest, RunReport};
pub use scenarios::{find, registry, Scenario, ScenarioKind};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "JCM_OUT_DIR";
