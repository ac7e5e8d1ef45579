//! Hamiltonians of the qubit–plasmon–phonon system.
//!
//! ```text
//! H₀ = ω₀ a†a + ω_b b†b + Σ_α ω_α σ_αα
//! H_I = i g_C (a+a†)(b−b†) + g_D (a+a†)² + g₁ (a+a†)(σ_eg+σ_ge) + g₂ (b+b†)(σ_eg+σ_ge)
//! g_C = (ω_p/2) √(ω_b/ω₀),   g_D = ω_p² / (4ω₀)
//! ```
//!
//! The two-photon term is multiplied by [`ModelParams::two_photon_scale`]; see
//! the README for why its default is 2.

use serde::{Deserialize, Serialize};

use crate::hilbert::{self, Level, Mode, Operator, SpaceDims};
use crate::{Error, Result, C64};

fn default_two_photon_scale() -> f64 {
    2.0
}

/// Physical constants, all in units of ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Plasmon frequency; the energy unit.
    pub omega0: f64,
    /// Phonon frequency.
    pub omega_b: f64,
    pub omega_e: f64,
    pub omega_g: f64,
    pub omega_l: f64,
    /// Plasmon–qubit coupling.
    pub g1: f64,
    /// Phonon–qubit coupling.
    pub g2: f64,
    /// Vibrational coupling constant.
    pub omega_p: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_eg: f64,
    pub gamma_gl: f64,
    /// Multiplier on the `g_D (a+a†)²` term.
    #[serde(default = "default_two_photon_scale")]
    pub two_photon_scale: f64,
}

impl Default for ModelParams {
    /// Resonant case: ω_e − ω_g = ω₀ = ω_b, ω_gl = 3.5ω₀, all rates 0.02ω₀.
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega_b: 1.0,
            omega_e: 4.5,
            omega_g: 3.5,
            omega_l: 0.0,
            g1: 0.6,
            g2: 0.6,
            omega_p: 0.25,
            gamma_a: 0.02,
            gamma_b: 0.02,
            gamma_eg: 0.02,
            gamma_gl: 0.02,
            two_photon_scale: default_two_photon_scale(),
        }
    }
}

impl ModelParams {
    /// Names accepted by [`ModelParams::set`], in declaration order.
    pub const FIELD_NAMES: [&'static str; 13] = [
        "omega0",
        "omega_b",
        "omega_e",
        "omega_g",
        "omega_l",
        "g1",
        "g2",
        "omega_p",
        "gamma_a",
        "gamma_b",
        "gamma_eg",
        "gamma_gl",
        "two_photon_scale",
    ];

    pub fn validate(&self) -> Result<()> {
        for name in Self::FIELD_NAMES {
            let v = self.get(name).expect("field list is exhaustive");
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite and non-negative, got {v}") });
            }
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidParameter { name: "omega0", reason: "must be positive".into() });
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "omega0" => self.omega0,
            "omega_b" => self.omega_b,
            "omega_e" => self.omega_e,
            "omega_g" => self.omega_g,
            "omega_l" => self.omega_l,
            "g1" => self.g1,
            "g2" => self.g2,
            "omega_p" => self.omega_p,
            "gamma_a" => self.gamma_a,
            "gamma_b" => self.gamma_b,
            "gamma_eg" => self.gamma_eg,
            "gamma_gl" => self.gamma_gl,
            "two_photon_scale" => self.two_photon_scale,
            _ => return None,
        })
    }

    /// Sets a field by name; `false` if the name is unknown.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "omega0" => &mut self.omega0,
            "omega_b" => &mut self.omega_b,
            "omega_e" => &mut self.omega_e,
            "omega_g" => &mut self.omega_g,
            "omega_l" => &mut self.omega_l,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "omega_p" => &mut self.omega_p,
            "gamma_a" => &mut self.gamma_a,
            "gamma_b" => &mut self.gamma_b,
            "gamma_eg" => &mut self.gamma_eg,
            "gamma_gl" => &mut self.gamma_gl,
            "two_photon_scale" => &mut self.two_photon_scale,
            _ => return false,
        };
        *slot = value;
        true
    }

    /// Smallest strictly positive decay rate, if any.
    pub fn min_positive_rate(&self) -> Option<f64> {
        [self.gamma_a, self.gamma_b, self.gamma_eg, self.gamma_gl]
            .into_iter()
            .filter(|g| *g > 0.0)
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// Plasmon–phonon coupling `g_C` and two-photon coupling `g_D`.
pub fn coupling_constants(params: &ModelParams) -> (f64, f64) {
    let g_c = 0.5 * params.omega_p * (params.omega_b / params.omega0).sqrt();
    let g_d = params.omega_p * params.omega_p / (4.0 * params.omega0);
    (g_c, g_d)
}

pub fn free_hamiltonian(params: &ModelParams, dims: SpaceDims) -> Operator {
    let na = hilbert::number_operator(dims, Mode::Photon).scaled(params.omega0);
    let nb = hilbert::number_operator(dims, Mode::Phonon).scaled(params.omega_b);
    let atom = [(Level::L, params.omega_l), (Level::G, params.omega_g), (Level::E, params.omega_e)]
        .into_iter()
        .fold(Operator::zeros(dims), |acc, (level, w)| &acc + &hilbert::atomic_operator(dims, level, level).scaled(w));
    &(&na + &nb) + &atom
}

pub fn interaction_hamiltonian(params: &ModelParams, dims: SpaceDims) -> Operator {
    let (g_c, g_d) = coupling_constants(params);
    let xa = hilbert::quadrature(dims, Mode::Photon);
    let b = hilbert::annihilator(dims, Mode::Phonon);
    let xb = &b + &b.dagger();
    let pb = &b - &b.dagger();
    let sx = hilbert::atomic_flip(dims, Level::E, Level::G);

    let beam_splitter = (&xa * &pb).scaled(C64::new(0.0, g_c));
    let two_photon = (&xa * &xa).scaled(g_d * params.two_photon_scale);
    let photon_qubit = (&xa * &sx).scaled(params.g1);
    let phonon_qubit = (&xb * &sx).scaled(params.g2);
    &(&beam_splitter + &two_photon) + &(&photon_qubit + &phonon_qubit)
}

/// Full Hamiltonian `H = H₀ + H_I`.
pub fn build_hamiltonian(params: &ModelParams, dims: SpaceDims) -> Operator {
    &free_hamiltonian(params, dims) + &interaction_hamiltonian(params, dims)
}

/// Split `H = H₁ + H_l` with `H_l = ω_l σ_ll`.
pub fn build_sector_hamiltonians(params: &ModelParams, dims: SpaceDims) -> (Operator, Operator) {
    let h = build_hamiltonian(params, dims);
    let hl = hilbert::atomic_operator(dims, Level::L, Level::L).scaled(params.omega_l);
    (&h - &hl, hl)
}

/// Settings for the Gaussian preparation pulse. Unset fields are resolved
/// against the dressed spectrum by [`crate::dynamics::resolve_pulse`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    /// Gaussian width (1/ω₀).
    pub sigma: f64,
    /// Carrier frequency; defaults to the dressed `|0⟩ → |0̃⟩` line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_s: Option<f64>,
    /// Peak amplitude; defaults to the value giving pulse area π on the
    /// dressed `|0⟩ → |0̃⟩` transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Pulse centre; defaults to 4σ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_center: Option<f64>,
}

impl Default for DriveParams {
    fn default() -> Self {
        Self { sigma: 5.0, omega_s: None, amplitude: None, t_center: None }
    }
}

impl DriveParams {
    /// The amplitude `√(3π)/σ` as printed alongside the pulse shape.
    pub fn printed_amplitude(sigma: f64) -> f64 {
        (3.0 * std::f64::consts::PI).sqrt() / sigma
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParameter { name: "sigma", reason: format!("must be positive, got {}", self.sigma) });
        }
        for (name, v) in [("omega_s", self.omega_s), ("amplitude", self.amplitude), ("t_center", self.t_center)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter { name, reason: "must be finite".into() });
                }
            }
        }
        Ok(())
    }
}

/// A fully specified Gaussian pulse
/// `A e^{−(t−t_c)²/(2σ²)} cos(ω_s (t−t_c)) (σ_gl + σ_lg)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub sigma: f64,
    pub omega_s: f64,
    pub amplitude: f64,
    pub t_center: f64,
}

impl Pulse {
    /// Half-width of the integration window around the centre, in units of σ.
    pub const WINDOW_SIGMAS: f64 = 6.0;

    pub fn envelope(&self, t: f64) -> f64 {
        let s = t - self.t_center;
        self.amplitude * (-s * s / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// Scalar prefactor multiplying `σ_gl + σ_lg` at time `t`.
    pub fn field(&self, t: f64) -> f64 {
        self.envelope(t) * (self.omega_s * (t - self.t_center)).cos()
    }

    /// Pulse area `∫ envelope dt`.
    pub fn area(&self) -> f64 {
        self.amplitude * self.sigma * (2.0 * std::f64::consts::PI).sqrt()
    }

    pub fn window_end(&self) -> f64 {
        self.t_center + Self::WINDOW_SIGMAS * self.sigma
    }
}

/// Drive Hamiltonian `H_p(t)` in the bare basis.
pub fn drive_hamiltonian(pulse: &Pulse, dims: SpaceDims, t: f64) -> Operator {
    hilbert::atomic_flip(dims, Level::G, Level::L).scaled(pulse.field(t))
}
