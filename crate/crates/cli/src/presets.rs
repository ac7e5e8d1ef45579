//! Built-in scenarios, one per figure panel.

use pairsim::observables::SpectrumSettings;
use pairsim::{DriveParams, ModelParams, SpaceDims};

use crate::config::{CorrelationSettings, InitialState, Scenario, SimulationConfig, Sweep, SweepValue};

pub struct Preset {
    pub name: &'static str,
    pub figure: &'static str,
    pub description: &'static str,
    build: fn() -> SimulationConfig,
}

impl Preset {
    pub fn config(&self) -> SimulationConfig {
        (self.build)()
    }
}

fn base(scenario: Scenario) -> SimulationConfig {
    SimulationConfig {
        scenario: Some(scenario),
        initial_state: InitialState::Tilde0,
        t_max: None,
        t_step: 0.5,
        gamma_ref: 0.02,
        omega0_hz: Some(2.0 * std::f64::consts::PI * 2.782e9),
        output_path: None,
        dims: SpaceDims::default(),
        model: ModelParams::default(),
        drive: None,
        sweep: None,
        spectrum: SpectrumSettings::default(),
        correlations: CorrelationSettings::default(),
    }
}

fn sweep(parameters: &[&str], values: &[f64]) -> Option<Sweep> {
    Some(Sweep {
        parameters: parameters.iter().map(|s| s.to_string()).collect(),
        values: values.iter().map(|&v| SweepValue::Shared(v)).collect(),
    })
}

fn fig2() -> SimulationConfig {
    let values: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    SimulationConfig { sweep: sweep(&["g1", "g2"], &values), ..base(Scenario::EigensSweep) }
}

fn fig3() -> SimulationConfig {
    SimulationConfig { drive: Some(DriveParams { sigma: 5.0, ..DriveParams::default() }), ..base(Scenario::PrepareCompare) }
}

fn omega_p_sweep() -> SimulationConfig {
    SimulationConfig { sweep: sweep(&["omega_p"], &[0.25, 0.4, 0.8]), ..base(Scenario::Evolve) }
}

fn fig4_loss() -> SimulationConfig {
    SimulationConfig { sweep: sweep(&["gamma_a", "gamma_b"], &[0.0, 0.01, 0.02]), ..base(Scenario::Evolve) }
}

fn fig5c() -> SimulationConfig {
    base(Scenario::Evolve)
}

fn fig5d() -> SimulationConfig {
    SimulationConfig { sweep: sweep(&["g1", "g2"], &[0.4, 0.6, 0.8]), ..base(Scenario::Evolve) }
}

fn fig5e() -> SimulationConfig {
    SimulationConfig { sweep: sweep(&["g2"], &[0.4, 0.6, 0.8]), ..base(Scenario::Evolve) }
}

fn fig5f() -> SimulationConfig {
    let mut c = base(Scenario::Evolve);
    c.model.gamma_a = 0.0;
    c.model.gamma_b = 0.0;
    c.sweep = sweep(&["gamma_gl"], &[0.01, 0.015, 0.03, 0.04]);
    c
}

fn fig6a() -> SimulationConfig {
    SimulationConfig {
        sweep: Some(Sweep {
            parameters: vec!["g1".into(), "g2".into()],
            values: vec![
                SweepValue::PerParameter(vec![0.0, 0.0]),
                SweepValue::PerParameter(vec![0.6, 0.0]),
                SweepValue::PerParameter(vec![0.6, 0.6]),
            ],
        }),
        ..base(Scenario::Spectrum)
    }
}

fn fig6b() -> SimulationConfig {
    SimulationConfig { sweep: sweep(&["g1", "g2"], &[0.4, 0.6, 0.8]), ..base(Scenario::Spectrum) }
}

fn correlations(columns: &[&str]) -> SimulationConfig {
    SimulationConfig {
        correlations: CorrelationSettings { columns: Some(columns.iter().map(|s| s.to_string()).collect()), ..Default::default() },
        ..base(Scenario::Correlations)
    }
}

fn fig7a() -> SimulationConfig {
    correlations(&["g2_aa", "g2_bb", "g2_ab"])
}

fn fig7b() -> SimulationConfig {
    correlations(&["g3_aaa", "g3_bbb"])
}

fn fig7c() -> SimulationConfig {
    correlations(&["g3_abb", "g3_baa"])
}

fn fig7d() -> SimulationConfig {
    correlations(&["g3_sab", "g3_saa", "g3_sbb"])
}

pub const PRESETS: [Preset; 16] = [
    Preset { name: "fig2", figure: "Fig. 2", description: "dressed spectrum vs g1 = g2", build: fig2 },
    Preset { name: "fig3", figure: "Fig. 3", description: "pi-pulse prepared vs |0~> initial state", build: fig3 },
    Preset { name: "fig4ab", figure: "Fig. 4(a,b)", description: "photon and phonon numbers vs omega_p", build: omega_p_sweep },
    Preset { name: "fig4-loss", figure: "Fig. 4 (blue)", description: "numbers vs cavity and vibrational loss", build: fig4_loss },
    Preset { name: "fig5a", figure: "Fig. 5(a)", description: "photon number vs omega_p", build: omega_p_sweep },
    Preset { name: "fig5b", figure: "Fig. 5(b)", description: "phonon number vs omega_p", build: omega_p_sweep },
    Preset { name: "fig5c", figure: "Fig. 5(c)", description: "population of |0~>", build: fig5c },
    Preset { name: "fig5d", figure: "Fig. 5(d)", description: "numbers vs g1 = g2", build: fig5d },
    Preset { name: "fig5e", figure: "Fig. 5(e)", description: "numbers vs g2 at g1 = 0.6", build: fig5e },
    Preset { name: "fig5f", figure: "Fig. 5(f)", description: "numbers vs gamma_gl without boson loss", build: fig5f },
    Preset { name: "fig6a", figure: "Fig. 6(a)", description: "emission spectrum, three coupling cases", build: fig6a },
    Preset { name: "fig6b", figure: "Fig. 6(b)", description: "emission spectrum vs g1 = g2", build: fig6b },
    Preset { name: "fig7a", figure: "Fig. 7(a)", description: "second-order correlations", build: fig7a },
    Preset { name: "fig7b", figure: "Fig. 7(b)", description: "third-order single-mode correlations", build: fig7b },
    Preset { name: "fig7c", figure: "Fig. 7(c)", description: "third-order cross correlations", build: fig7c },
    Preset { name: "fig7d", figure: "Fig. 7(d)", description: "atom-pair third-order correlations", build: fig7d },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// Text table of preset name, figure, subcommand and description.
pub fn table() -> String {
    let mut out = format!("{:<10} {:<14} {:<13} {}\n", "preset", "figure", "subcommand", "description");
    for p in &PRESETS {
        let scenario = p.config().scenario.expect("presets set a scenario");
        out.push_str(&format!("{:<10} {:<14} {:<13} {}\n", p.name, p.figure, crate::run::subcommand_for(scenario), p.description));
    }
    out
}
