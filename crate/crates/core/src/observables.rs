//! Dressed particle numbers, output fluxes, equal-time correlation functions
//! and the emission spectrum.

use serde::{Deserialize, Serialize};

use crate::dressed::{ChannelId, DressedBasis};
use crate::dynamics::{FreePropagator, LindbladGenerator, Trajectory};
use crate::hilbert::{DensityMatrix, Operator};
use crate::linalg;
use crate::model::ModelParams;
use crate::{CMat, Error, Result, C64};

/// Products of dressed numbers below this make `g⁽ⁿ⁾` undefined.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;
/// Spectrum values above `-SPECTRUM_CLIP` but below zero are clipped to zero.
pub const SPECTRUM_CLIP: f64 = 1e-10;
/// Tail flag threshold for the two-time correlation window.
pub const TAIL_THRESHOLD: f64 = 1e-3;

const ZERO: C64 = C64::new(0.0, 0.0);

fn check_dims(rho: &DensityMatrix, op: &Operator) -> Result<()> {
    if rho.dims() != op.dims() {
        return Err(Error::DimensionMismatch { expected: rho.dims().dim(), found: op.dims().dim() });
    }
    Ok(())
}

/// `⟨X⁻X⁺⟩ = Tr[X⁺† X⁺ ρ]`.
pub fn dressed_number(rho: &DensityMatrix, xp: &Operator) -> Result<f64> {
    check_dims(rho, xp)?;
    let n = linalg::adjoint(xp.matrix()) * xp.matrix();
    Ok(linalg::trace_product(&n, rho.matrix()).re)
}

/// Output flux `γ_c ⟨X⁻X⁺⟩` for a vacuum input.
pub fn output_flux(rho: &DensityMatrix, xp: &Operator, gamma: f64) -> Result<f64> {
    Ok(gamma * dressed_number(rho, xp)?)
}

/// Operator ordering of the `g⁽ⁿ⁾` numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// `X⁻_{c1}…X⁻_{cn} X⁺_{cn}…X⁺_{c1}`: the adjoint pair `(X⁺_{cn}…X⁺_{c1})†(X⁺_{cn}…X⁺_{c1})`.
    #[default]
    Normal,
    /// `X⁻_{c1}…X⁻_{cn} X⁺_{c1}…X⁺_{cn}`, ascending on both sides.
    Literal,
}

impl Ordering {
    pub fn label(self) -> &'static str {
        match self {
            Ordering::Normal => "normal",
            Ordering::Literal => "literal",
        }
    }
}

/// Numerator operator for `g⁽ⁿ⁾` from positive-frequency matrices `X⁺_{c1}, …, X⁺_{cn}`.
pub fn gn_numerator(xs: &[&CMat], ordering: Ordering) -> CMat {
    let n = xs[0].nrows();
    let mut minus = linalg::identity(n);
    for x in xs {
        minus = &minus * linalg::adjoint(x);
    }
    let mut plus = linalg::identity(n);
    match ordering {
        Ordering::Normal => {
            for x in xs.iter().rev() {
                plus = &plus * *x;
            }
        }
        Ordering::Literal => {
            for x in xs {
                plus = &plus * *x;
            }
        }
    }
    &minus * &plus
}

/// Equal-time `g⁽ⁿ⁾`; `None` when the product of single-mode numbers is below the floor.
pub fn gn_equal_time(rho: &DensityMatrix, xs: &[&Operator], ordering: Ordering) -> Result<Option<f64>> {
    if xs.is_empty() {
        return Err(Error::InvalidParameter { name: "modes", reason: "at least one operator is required".into() });
    }
    for x in xs {
        check_dims(rho, x)?;
    }
    let mats: Vec<&CMat> = xs.iter().map(|x| x.matrix()).collect();
    let num = linalg::trace_product(&gn_numerator(&mats, ordering), rho.matrix()).re;
    let mut den = 1.0;
    for x in xs {
        den *= dressed_number(rho, x)?;
    }
    Ok(ratio(num, den))
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den >= DENOMINATOR_FLOOR).then(|| num / den)
}

/// Dressed positive-frequency operators of every channel, in the dressed basis.
#[derive(Debug, Clone)]
pub struct PositiveParts {
    parts: Vec<(ChannelId, CMat)>,
    numbers: Vec<(ChannelId, CMat)>,
}

impl PositiveParts {
    pub fn new(basis: &DressedBasis) -> Self {
        let parts: Vec<(ChannelId, CMat)> =
            ChannelId::ALL.iter().map(|&c| (c, basis.positive_part_frame(&c.system_operator(basis.dims())))).collect();
        let numbers = parts.iter().map(|(c, x)| (*c, linalg::adjoint(x) * x)).collect();
        Self { parts, numbers }
    }

    /// `X⁺_c` in the dressed basis.
    pub fn get(&self, c: ChannelId) -> &CMat {
        &self.parts.iter().find(|(id, _)| *id == c).expect("all channels present").1
    }

    /// `X⁻_c X⁺_c` in the dressed basis.
    pub fn number(&self, c: ChannelId) -> &CMat {
        &self.numbers.iter().find(|(id, _)| *id == c).expect("all channels present").1
    }
}

/// Time series of the flux observables.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FluxSeries {
    pub times: Vec<f64>,
    pub gamma_t: Vec<f64>,
    pub mean_na: Vec<f64>,
    pub mean_nb: Vec<f64>,
    pub flux_a: Vec<f64>,
    pub flux_b: Vec<f64>,
    pub pop_tilde0: Vec<f64>,
}

impl FluxSeries {
    /// Largest photon and phonon dressed numbers.
    pub fn peaks(&self) -> (f64, f64) {
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (max(&self.mean_na), max(&self.mean_nb))
    }
}

/// Flux observables along a trajectory; `gamma_ref` scales the time axis.
pub fn flux_series(traj: &Trajectory, basis: &DressedBasis, params: &ModelParams, gamma_ref: f64) -> FluxSeries {
    let parts = PositiveParts::new(basis);
    let t0 = basis.index_tilde0();
    let mut out = FluxSeries::default();
    for (i, &t) in traj.times().iter().enumerate() {
        let rho = traj.frame_state(i);
        let na = linalg::trace_product(parts.number(ChannelId::A), rho).re;
        let nb = linalg::trace_product(parts.number(ChannelId::B), rho).re;
        out.times.push(t);
        out.gamma_t.push(gamma_ref * t);
        out.mean_na.push(na);
        out.mean_nb.push(nb);
        out.flux_a.push(params.gamma_a * na);
        out.flux_b.push(params.gamma_b * nb);
        out.pop_tilde0.push(rho[(t0, t0)].re);
    }
    out
}

/// Equal-time correlation along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationResult {
    pub times: Vec<f64>,
    pub g_n: Vec<Option<f64>>,
    pub mode_spec: Vec<ChannelId>,
    pub ordering: Ordering,
}

/// The correlation columns written by the correlations scenario; `gl` plays the atomic `σ`.
pub const CORRELATION_SPECS: [(&str, &[ChannelId]); 10] = [
    ("g2_aa", &[ChannelId::A, ChannelId::A]),
    ("g2_bb", &[ChannelId::B, ChannelId::B]),
    ("g2_ab", &[ChannelId::A, ChannelId::B]),
    ("g3_aaa", &[ChannelId::A, ChannelId::A, ChannelId::A]),
    ("g3_bbb", &[ChannelId::B, ChannelId::B, ChannelId::B]),
    ("g3_abb", &[ChannelId::A, ChannelId::B, ChannelId::B]),
    ("g3_baa", &[ChannelId::B, ChannelId::A, ChannelId::A]),
    ("g3_sab", &[ChannelId::Gl, ChannelId::A, ChannelId::B]),
    ("g3_saa", &[ChannelId::Gl, ChannelId::A, ChannelId::A]),
    ("g3_sbb", &[ChannelId::Gl, ChannelId::B, ChannelId::B]),
];

/// `g⁽ⁿ⁾` for `modes` at every snapshot of `traj`.
pub fn correlation_series(traj: &Trajectory, basis: &DressedBasis, modes: &[ChannelId], ordering: Ordering) -> Result<CorrelationResult> {
    if modes.is_empty() {
        return Err(Error::InvalidParameter { name: "modes", reason: "at least one channel is required".into() });
    }
    let parts = PositiveParts::new(basis);
    let xs: Vec<&CMat> = modes.iter().map(|&c| parts.get(c)).collect();
    let numerator = gn_numerator(&xs, ordering);
    let g_n = traj
        .frame_states()
        .iter()
        .map(|rho| {
            let num = linalg::trace_product(&numerator, rho).re;
            let den: f64 = modes.iter().map(|&c| linalg::trace_product(parts.number(c), rho).re).product();
            ratio(num, den)
        })
        .collect();
    Ok(CorrelationResult { times: traj.times().to_vec(), g_n, mode_spec: modes.to_vec(), ordering })
}

/// Numerical settings of the emission spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSettings {
    /// Quadrature step in both `t` and `τ`.
    #[serde(default = "SpectrumSettings::default_tau_step")]
    pub tau_step: f64,
    /// Window length `T`; defaults to `20 / min γ_c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default = "SpectrumSettings::default_omega_min")]
    pub omega_min: f64,
    #[serde(default = "SpectrumSettings::default_omega_max")]
    pub omega_max: f64,
    #[serde(default = "SpectrumSettings::default_omega_step")]
    pub omega_step: f64,
    /// Peaks lower than this fraction of the maximum are ignored.
    #[serde(default = "SpectrumSettings::default_prominence")]
    pub prominence: f64,
}

impl SpectrumSettings {
    /// Window length in units of `1 / min γ_c`.
    pub const WINDOW_LIFETIMES: f64 = 20.0;

    fn default_tau_step() -> f64 {
        0.1
    }
    fn default_omega_min() -> f64 {
        0.0
    }
    fn default_omega_max() -> f64 {
        4.0
    }
    fn default_omega_step() -> f64 {
        0.002
    }
    fn default_prominence() -> f64 {
        1e-3
    }

    pub fn omega_grid(&self) -> Vec<f64> {
        let n = ((self.omega_max - self.omega_min) / self.omega_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.omega_min + i as f64 * self.omega_step).collect()
    }

    pub fn resolve_window(&self, params: &ModelParams) -> Result<f64> {
        match (self.window, params.min_positive_rate()) {
            (Some(w), _) => Ok(w),
            (None, Some(g)) => Ok(Self::WINDOW_LIFETIMES / g),
            (None, None) => Err(Error::InvalidParameter { name: "window", reason: "all decay rates vanish; set the window explicitly".into() }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("tau_step", self.tau_step), ("omega_step", self.omega_step)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter { name, reason: format!("must be positive, got {v}") });
            }
        }
        if let Some(w) = self.window {
            if !(w.is_finite() && w > self.tau_step) {
                return Err(Error::InvalidParameter { name: "window", reason: format!("must exceed tau_step, got {w}") });
            }
        }
        if !(self.omega_max > self.omega_min) {
            return Err(Error::InvalidParameter { name: "omega_max", reason: "must exceed omega_min".into() });
        }
        if !(0.0..1.0).contains(&self.prominence) {
            return Err(Error::InvalidParameter { name: "prominence", reason: "must lie in [0, 1)".into() });
        }
        Ok(())
    }
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        Self {
            tau_step: Self::default_tau_step(),
            window: None,
            omega_min: Self::default_omega_min(),
            omega_max: Self::default_omega_max(),
            omega_step: Self::default_omega_step(),
            prominence: Self::default_prominence(),
        }
    }
}

/// Diagonal sums `G_j = Σ_i w_i w_{i+j} C(t_i, t_i + τ_j)` of the trapezoid-weighted
/// two-time correlation on the square `[0, T]²`.
#[derive(Debug, Clone)]
pub struct IntegratedCorrelation {
    pub tau: Vec<f64>,
    pub diagonal_sums: Vec<C64>,
    /// `max_i |C(t_i, T − t_i)|`.
    pub tail: f64,
    /// `max_i |C(t_i, t_i)|`.
    pub max: f64,
}

impl IntegratedCorrelation {
    pub fn tail_ratio(&self) -> f64 {
        if self.max > 0.0 {
            self.tail / self.max
        } else {
            0.0
        }
    }
}

/// Sparse list of the nonzero off-diagonal entries of `b`, with its diagonal.
struct TraceKernel {
    entries: Vec<(usize, usize, C64)>,
    diagonal: Vec<C64>,
}

impl TraceKernel {
    fn new(b: &CMat) -> Self {
        let d = b.nrows();
        let mut entries = Vec::new();
        for n in 0..d {
            for m in 0..d {
                if m != n && b[(n, m)] != ZERO {
                    // Tr[B X] picks up B_nm X_mn.
                    entries.push((m, n, b[(n, m)]));
                }
            }
        }
        Self { entries, diagonal: (0..d).map(|i| b[(i, i)]).collect() }
    }
}

/// Two-time correlation `⟨A(t) B(t+τ)⟩` integrated along diagonals of `[0, T]²`,
/// starting from `rho0` at `t = 0`, with `A = X⁻_σ`, `B = X⁺_σ` unless given.
pub fn integrated_correlation(
    generator: &LindbladGenerator,
    rho0: &DensityMatrix,
    a: &CMat,
    b: &CMat,
    tau_step: f64,
    window: f64,
) -> Result<IntegratedCorrelation> {
    let prop = FreePropagator::new(generator)?;
    let d = prop.dim();
    let n_steps = (window / tau_step).round() as usize;
    if n_steps < 2 {
        return Err(Error::InvalidParameter { name: "window", reason: "needs at least two quadrature steps".into() });
    }
    let h = tau_step;
    let stepper = prop.stepper(h)?;
    let kernel = TraceKernel::new(b);
    let weight = |i: usize| if i == 0 || i == n_steps { 0.5 * h } else { h };

    // r_j = exp(Rᵀ τ_j) diag(B) carries the diagonal part of the trace.
    let has_diag = kernel.diagonal.iter().any(|x| *x != ZERO);
    let mut diag_weights: Vec<Vec<C64>> = Vec::new();
    if has_diag {
        let p = stepper.population_step();
        let mut r = kernel.diagonal.clone();
        for _ in 0..=n_steps {
            diag_weights.push(r.clone());
            r = (0..d).map(|k| (0..d).map(|m| p[(m, k)] * r[m]).sum()).collect();
        }
    }
    let evaluate = |x: &CMat, j: usize, phases: &[C64]| -> C64 {
        let mut acc: C64 = kernel.entries.iter().zip(phases).map(|((m, n, bnm), ph)| *bnm * x[(*m, *n)] * ph).sum();
        if has_diag {
            acc += (0..d).map(|m| diag_weights[j][m] * x[(m, m)]).sum::<C64>();
        }
        acc
    };

    let mut rho = linalg::to_frame(generator.basis().states(), rho0.matrix());
    let diagonal = (0..d).all(|n| (0..d).all(|m| m == n || rho[(m, n)] == ZERO));
    let times_a = |r: &CMat| -> CMat {
        if diagonal {
            CMat::from_fn(d, d, |m, n| r[(m, m)] * a[(m, n)])
        } else {
            r * a
        }
    };

    let mut sums = vec![ZERO; n_steps + 1];
    let mut prefix = CMat::zeros(d, d);
    let mut tail = 0.0f64;
    let mut max = 0.0f64;
    for i in 0..=n_steps {
        let y = times_a(&rho);
        let c0 = evaluate(&y, 0, &vec![C64::new(1.0, 0.0); kernel.entries.len()]);
        max = max.max(c0.norm());
        sums[0] += c0 * weight(i) * weight(i);

        let j = n_steps - i;
        if j > 0 {
            let tau = j as f64 * h;
            let phases: Vec<C64> = kernel.entries.iter().map(|(m, n, _)| prop.coherence_factor(*m, *n, tau)).collect();
            let wi = weight(i);
            let q = CMat::from_fn(d, d, |m, n| prefix[(m, n)] * h + y[(m, n)] * (0.5 * h * wi));
            sums[j] = evaluate(&q, j, &phases);
            tail = tail.max(evaluate(&y, j, &phases).norm());
            let w = weight(i);
            for n in 0..d {
                for m in 0..d {
                    prefix[(m, n)] += y[(m, n)] * w;
                }
            }
        } else {
            tail = tail.max(c0.norm());
        }
        if i < n_steps {
            rho = stepper.step(&rho);
        }
    }
    let tau = (0..=n_steps).map(|j| j as f64 * h).collect();
    Ok(IntegratedCorrelation { tau, diagonal_sums: sums, tail, max })
}

/// A local maximum of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
}

/// Emission spectrum on a frequency grid.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub omega_grid: Vec<f64>,
    pub s: Vec<f64>,
    pub peaks: Vec<Peak>,
    /// Ratio of the correlation tail at `T` to its maximum.
    pub tail_ratio: f64,
    pub window: f64,
}

/// `S(ω) = (1/2π) ∬ C(t,t′) e^{−iω(t−t′)}` from diagonal sums, using `C(t′,t) = C(t,t′)*`.
pub fn spectrum(corr: &IntegratedCorrelation, omega_grid: &[f64], prominence: f64) -> Result<SpectrumResult> {
    if corr.tail_ratio() > TAIL_THRESHOLD {
        return Err(Error::WindowTooShort { tail: corr.tail, max: corr.max });
    }
    let s = spectrum_values(&corr.tau, &corr.diagonal_sums, omega_grid);
    let window = corr.tau.last().copied().unwrap_or(0.0);
    let mut result = SpectrumResult { omega_grid: omega_grid.to_vec(), s, peaks: Vec::new(), tail_ratio: corr.tail_ratio(), window };
    result.peaks = peak_find(&result, prominence);
    Ok(result)
}

fn spectrum_values(tau: &[f64], sums: &[C64], omega_grid: &[f64]) -> Vec<f64> {
    let h = if tau.len() > 1 { tau[1] - tau[0] } else { 0.0 };
    omega_grid
        .iter()
        .map(|&w| {
            let step = C64::from_polar(1.0, w * h);
            let mut phase = step;
            let mut acc = ZERO;
            for g in &sums[1..] {
                acc += g * phase;
                phase *= step;
            }
            let v = (sums[0].re + 2.0 * acc.re) / (2.0 * std::f64::consts::PI);
            if v < 0.0 && v > -SPECTRUM_CLIP {
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// Spectrum from the initial state `rho0` using the dressed atomic `σ±`.
pub fn emission_spectrum(generator: &LindbladGenerator, params: &ModelParams, rho0: &DensityMatrix, settings: &SpectrumSettings) -> Result<SpectrumResult> {
    settings.validate()?;
    let window = settings.resolve_window(params)?;
    let sigma_plus = generator.basis().positive_part_frame(&ChannelId::Gl.system_operator(generator.dims()));
    let sigma_minus = linalg::adjoint(&sigma_plus);
    let corr = integrated_correlation(generator, rho0, &sigma_minus, &sigma_plus, settings.tau_step, window)?;
    spectrum(&corr, &settings.omega_grid(), settings.prominence)
}

/// Brute-force `S(ω)` from a full two-time table `c[i][j] = C(t_i, t_i + τ_j)` on a
/// uniform grid of step `h`, where `j` runs to `N − i`.
pub fn spectrum_from_table(c: &[Vec<C64>], h: f64, omega_grid: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let w = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };
    omega_grid
        .iter()
        .map(|&omega| {
            let mut acc = ZERO;
            for i in 0..=n {
                for k in 0..=n {
                    let value = if k >= i { c[i][k - i] } else { c[k][i - k].conj() };
                    let dt = (i as f64 - k as f64) * h;
                    acc += value * C64::from_polar(w(i) * w(k), -omega * dt);
                }
            }
            acc.re / (2.0 * std::f64::consts::PI)
        })
        .collect()
}

/// Local maxima above `prominence · max S`, refined by a parabola through the three
/// neighbouring samples.
pub fn peak_find(s: &SpectrumResult, prominence: f64) -> Vec<Peak> {
    let (w, v) = (&s.omega_grid, &s.s);
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if v.len() < 3 || !(top > 0.0) {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    for i in 1..v.len() - 1 {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > prominence * top {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let (shift, height) = if denom < 0.0 {
                let x = 0.5 * (v[i - 1] - v[i + 1]) / denom;
                (x, v[i] - 0.25 * (v[i - 1] - v[i + 1]) * x)
            } else {
                (0.0, v[i])
            };
            let step = 0.5 * (w[i + 1] - w[i - 1]);
            peaks.push(Peak { omega: w[i] + shift * step, height });
        }
    }
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{self, Level, Mode, SpaceDims, StateVector};

    #[test]
    fn g2_of_diagonal_distribution() {
        let d = SpaceDims::new(3, 1).unwrap();
        let weights = [0.6, 0.3, 0.1];
        let n = d.dim();
        let m = CMat::from_fn(n, n, |i, j| {
            let (na, _, level) = d.labels(i);
            if i == j && level == Level::G {
                C64::new(weights[na], 0.0)
            } else {
                ZERO
            }
        });
        let rho = DensityMatrix::new(d, m).unwrap();
        let a = hilbert::annihilator(d, Mode::Photon);
        let g2 = gn_equal_time(&rho, &[&a, &a], Ordering::Normal).unwrap().unwrap();
        assert!((g2 - 0.8).abs() < 1e-12);
        let lit = gn_equal_time(&rho, &[&a, &a], Ordering::Literal).unwrap().unwrap();
        assert!((lit - 0.8).abs() < 1e-12);
    }

    #[test]
    fn undefined_below_floor() {
        let d = SpaceDims::new(3, 1).unwrap();
        let rho = StateVector::basis(d, 0, 0, Level::G).projector();
        let a = hilbert::annihilator(d, Mode::Photon);
        assert_eq!(gn_equal_time(&rho, &[&a, &a], Ordering::Normal).unwrap(), None);
        assert_eq!(dressed_number(&rho, &a).unwrap(), 0.0);
        assert_eq!(output_flux(&rho, &a, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn orderings_differ_for_noncommuting_operators() {
        let d = SpaceDims::new(3, 3).unwrap();
        let a = hilbert::annihilator(d, Mode::Photon);
        let b = hilbert::annihilator(d, Mode::Phonon);
        let xs = [a.matrix(), b.matrix()];
        let normal = gn_numerator(&xs, Ordering::Normal);
        let literal = gn_numerator(&xs, Ordering::Literal);
        // Commuting inputs: both orderings agree.
        assert!(linalg::max_abs(&(&normal - &literal)) < 1e-14);
        let ad = a.dagger();
        let xs = [a.matrix(), ad.matrix()];
        let normal = gn_numerator(&xs, Ordering::Normal);
        let literal = gn_numerator(&xs, Ordering::Literal);
        assert!(linalg::max_abs(&(&normal - &literal)) > 0.1);
    }

    fn synthetic(values: &[f64], step: f64, start: f64) -> SpectrumResult {
        SpectrumResult {
            omega_grid: (0..values.len()).map(|i| start + i as f64 * step).collect(),
            s: values.to_vec(),
            peaks: Vec::new(),
            tail_ratio: 0.0,
            window: 0.0,
        }
    }

    #[test]
    fn flat_spectrum_has_no_peaks() {
        assert!(peak_find(&synthetic(&[1.0; 50], 0.01, 0.0), 1e-3).is_empty());
        assert!(peak_find(&synthetic(&[0.0; 50], 0.01, 0.0), 1e-3).is_empty());
    }

    #[test]
    fn lorentzian_peak_located() {
        let step = 0.002;
        let grid: Vec<f64> = (0..=2000).map(|i| i as f64 * step).collect();
        let center = 3.5;
        let s: Vec<f64> = grid.iter().map(|w| 0.01 / ((w - center).powi(2) + 0.0001)).collect();
        let peaks = peak_find(&synthetic(&s, step, 0.0), 1e-3);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].omega - center).abs() <= 0.5 * step);
        let off: Vec<f64> = grid.iter().map(|w| 0.01 / ((w - 1.2345).powi(2) + 0.0004)).collect();
        let peaks = peak_find(&synthetic(&off, step, 0.0), 1e-3);
        assert!((peaks[0].omega - 1.2345).abs() < 1e-4);
    }

    #[test]
    fn fast_spectrum_matches_table() {
        // Damped oscillation C(t, t+τ) = e^{-κt} e^{-(iΔ+Γ)τ}.
        let (h, n) = (0.2, 60);
        let (kappa, delta, gamma) = (0.05, 2.0, 0.3);
        let table: Vec<Vec<C64>> = (0..=n)
            .map(|i| (0..=n - i).map(|j| C64::new(-kappa * i as f64 * h, 0.0).exp() * C64::new(-gamma * j as f64 * h, -delta * j as f64 * h).exp()).collect())
            .collect();
        let w = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };
        let sums: Vec<C64> = (0..=n).map(|j| (0..=n - j).map(|i| table[i][j] * w(i) * w(i + j)).sum()).collect();
        let tau: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
        let grid: Vec<f64> = (0..40).map(|k| k as f64 * 0.1).collect();
        let fast = spectrum_values(&tau, &sums, &grid);
        let slow = spectrum_from_table(&table, h, &grid);
        for (f, s) in fast.iter().zip(&slow) {
            assert!((f - s).abs() < 1e-12 * s.abs().max(1.0));
            assert!(*s > -1e-12);
        }
    }
}
