//! TOML configuration for a simulation run.

use serde::{Deserialize, Serialize};

use pairsim::observables::{Ordering, SpectrumSettings, CORRELATION_SPECS};
use pairsim::{DriveParams, ModelParams, SpaceDims};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Evolve,
    Spectrum,
    Correlations,
    EigensSweep,
    PrepareCompare,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::Evolve => "evolve",
            Scenario::Spectrum => "spectrum",
            Scenario::Correlations => "correlations",
            Scenario::EigensSweep => "eigens-sweep",
            Scenario::PrepareCompare => "prepare-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    #[default]
    Tilde0,
    Ground,
    PiPulse,
}

/// One sweep point: either a value shared by every swept parameter or one value each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Shared(f64),
    PerParameter(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    /// Model parameter names, set together at each point.
    pub parameters: Vec<String>,
    pub values: Vec<SweepValue>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSettings {
    #[serde(default)]
    pub ordering: Ordering,
    /// Subset of correlation columns to write; all when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Defaults to the scenario implied by the subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub initial_state: InitialState,
    /// Horizon in 1/ω₀; defaults to 8 / min γ_c.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default = "default_t_step")]
    pub t_step: f64,
    /// Rate used for the `gamma_t` axis.
    #[serde(default = "default_gamma_ref")]
    pub gamma_ref: f64,
    /// Laboratory value of ω₀, recorded in output metadata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_hz: Option<f64>,
    /// Stem of the output file names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub dims: SpaceDims,
    pub model: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub spectrum: SpectrumSettings,
    #[serde(default)]
    pub correlations: CorrelationSettings,
}

fn default_t_step() -> f64 {
    0.5
}

fn default_gamma_ref() -> f64 {
    0.02
}

/// Resolved sweep point: parameter assignments and the file-name suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub assignments: Vec<(String, f64)>,
}

impl SweepPoint {
    pub fn suffix(&self) -> String {
        self.assignments.iter().map(|(n, v)| format!("_{n}-{v}")).collect()
    }
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::config_from_toml(&e))?;
        config.validate()?;
        Ok(config)
    }

    /// Parses `text` as TOML merged over `base`: tables merge key by key, anything else replaces.
    pub fn from_toml_over(base: &SimulationConfig, text: &str) -> Result<Self, CliError> {
        let overlay: toml::Table = toml::from_str(text).map_err(|e| CliError::config_from_toml(&e))?;
        let mut merged = toml::Table::try_from(base).expect("configuration is always serialisable");
        merge(&mut merged, overlay);
        let config: Self = merged.try_into().map_err(|e| CliError::config_from_toml(&e))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serialisable")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.dims.validate().map_err(|e| CliError::config("dims", e))?;
        self.model.validate().map_err(|e| CliError::from_core_validation("model", e))?;
        if let Some(d) = &self.drive {
            d.validate().map_err(|e| CliError::from_core_validation("drive", e))?;
        }
        self.spectrum.validate().map_err(|e| CliError::from_core_validation("spectrum", e))?;
        if let Some(t) = self.t_max {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::config("t_max", format!("must be positive, got {t}")));
            }
        }
        if !(self.t_step.is_finite() && self.t_step > 0.0) {
            return Err(CliError::config("t_step", format!("must be positive, got {}", self.t_step)));
        }
        if !(self.gamma_ref.is_finite() && self.gamma_ref > 0.0) {
            return Err(CliError::config("gamma_ref", format!("must be positive, got {}", self.gamma_ref)));
        }
        if let Some(columns) = &self.correlations.columns {
            if columns.is_empty() {
                return Err(CliError::config("correlations.columns", "must not be empty"));
            }
            for c in columns {
                if !CORRELATION_SPECS.iter().any(|(name, _)| name == c) {
                    return Err(CliError::config("correlations.columns", format!("unknown column `{c}`")));
                }
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.parameters.is_empty() {
                return Err(CliError::config("sweep.parameters", "must name at least one parameter"));
            }
            for name in &sweep.parameters {
                if self.model.get(name).is_none() {
                    return Err(CliError::config("sweep.parameters", format!("unknown model parameter `{name}`")));
                }
            }
            if sweep.values.is_empty() {
                return Err(CliError::config("sweep.values", "must not be empty"));
            }
            for v in &sweep.values {
                if let SweepValue::PerParameter(list) = v {
                    if list.len() != sweep.parameters.len() {
                        return Err(CliError::config(
                            "sweep.values",
                            format!("expected {} values per point, got {}", sweep.parameters.len(), list.len()),
                        ));
                    }
                }
            }
            for point in self.sweep_points() {
                self.params_at(&point)?;
            }
        }
        Ok(())
    }

    /// Sweep points, or a single empty point without a sweep.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        match &self.sweep {
            None => vec![SweepPoint { assignments: Vec::new() }],
            Some(s) => s
                .values
                .iter()
                .map(|v| {
                    let assignments = s
                        .parameters
                        .iter()
                        .enumerate()
                        .map(|(i, n)| {
                            let value = match v {
                                SweepValue::Shared(x) => *x,
                                SweepValue::PerParameter(list) => list[i],
                            };
                            (n.clone(), value)
                        })
                        .collect();
                    SweepPoint { assignments }
                })
                .collect(),
        }
    }

    pub fn params_at(&self, point: &SweepPoint) -> Result<ModelParams, CliError> {
        let mut p = self.model;
        for (name, value) in &point.assignments {
            p.set(name, *value);
        }
        p.validate().map_err(|e| CliError::from_core_validation("sweep.values", e))?;
        Ok(p)
    }
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}
