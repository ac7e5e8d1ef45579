//! Command-line front end: configuration, presets and CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::SimulationConfig;
pub use error::CliError;
pub use run::Command;

use std::path::Path;

/// Loads the configuration from a preset, a file, or a file merged over a preset.
pub fn load_config(config: Option<&Path>, preset: Option<&str>) -> Result<SimulationConfig, CliError> {
    let base = match preset {
        Some(name) => Some(presets::find(name).ok_or_else(|| CliError::config("preset", format!("unknown preset `{name}`")))?.config()),
        None => None,
    };
    let text = match config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?),
        None => None,
    };
    match (base, text) {
        (Some(base), Some(text)) => SimulationConfig::from_toml_over(&base, &text),
        (Some(base), None) => Ok(base),
        (None, Some(text)) => SimulationConfig::from_toml(&text),
        (None, None) => Err(CliError::config("config", "either --config or --preset is required")),
    }
}
