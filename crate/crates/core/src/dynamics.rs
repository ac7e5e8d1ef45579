//! Global master-equation dynamics in the dressed basis.
//!
//! Every jump operator is a dressed transition `|j⟩⟨k|`, so in the eigenbasis
//! of `H` the dissipator acts element-wise:
//!
//! ```text
//! ρ̇_mn = [i(E_n − E_m) − ½(κ_m + κ_n)] ρ_mn + δ_mn Σ_k W_mk ρ_kk
//! ```
//!
//! with `W_jk` the summed rate from `k` to `j` and `κ_k = Σ_j W_jk`. The drive,
//! when present, adds a dense `i f(t) [ρ, S]` term.

use crate::dressed::{self, DressedBasis, JumpChannel};
use crate::expm::expm;
use crate::hilbert::{self, DensityMatrix, Level, Operator, SpaceDims};
use crate::linalg;
use crate::model::{self, DriveParams, ModelParams, Pulse};
use crate::{CMat, Error, Result, C64};

/// Upper bound on `dim²` for the dense superoperator reference.
pub const SUPEROP_LIMIT: usize = 10_000;
/// Stored snapshots with an eigenvalue below this abort the integration.
pub const POSITIVITY_ABORT: f64 = -1e-6;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Global master-equation generator: Hamiltonian, dressed jump channels and optional drive.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: Operator,
    basis: DressedBasis,
    channels: Vec<JumpChannel>,
    drive: Option<Pulse>,
    transfer: Vec<f64>,
    kappa: Vec<f64>,
    drive_frame: CMat,
}

impl LindbladGenerator {
    /// `basis` must diagonalise `hamiltonian`; channels index into it.
    pub fn new(hamiltonian: Operator, basis: DressedBasis, channels: Vec<JumpChannel>) -> Result<Self> {
        let dev = hamiltonian.hermitian_deviation();
        if dev > 1e-12 * hamiltonian.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        if hamiltonian.dims() != basis.dims() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: hamiltonian.dims().dim() });
        }
        let d = basis.dim();
        let mut transfer = vec![0.0; d * d];
        let mut kappa = vec![0.0; d];
        for ch in &channels {
            if !(ch.rate.is_finite() && ch.rate >= 0.0) {
                return Err(Error::InvalidParameter { name: "rate", reason: format!("channel rate {} is not a non-negative number", ch.rate) });
            }
            if ch.j >= d || ch.k >= d {
                return Err(Error::DimensionMismatch { expected: d, found: ch.j.max(ch.k) + 1 });
            }
            transfer[ch.j * d + ch.k] += ch.rate;
            kappa[ch.k] += ch.rate;
        }
        let drive_frame = basis.to_frame(&hilbert::atomic_flip(basis.dims(), Level::G, Level::L));
        Ok(Self { hamiltonian, basis, channels, drive: None, transfer, kappa, drive_frame })
    }

    /// Builds `H`, its dressed basis and every jump channel from physical parameters.
    pub fn from_model(params: &ModelParams, dims: SpaceDims) -> Result<Self> {
        params.validate()?;
        dims.validate()?;
        let h = model::build_hamiltonian(params, dims);
        let basis = dressed::diagonalize(&h)?;
        let channels = dressed::jump_channels(&basis, params);
        Self::new(h, basis, channels)
    }

    pub fn with_drive(mut self, pulse: Pulse) -> Self {
        self.drive = Some(pulse);
        self
    }

    pub fn without_drive(mut self) -> Self {
        self.drive = None;
        self
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn basis(&self) -> &DressedBasis {
        &self.basis
    }

    pub fn channels(&self) -> &[JumpChannel] {
        &self.channels
    }

    pub fn drive(&self) -> Option<&Pulse> {
        self.drive.as_ref()
    }

    pub fn dims(&self) -> SpaceDims {
        self.basis.dims()
    }

    /// Total decay rate out of each eigenstate.
    pub fn decay_rates(&self) -> &[f64] {
        &self.kappa
    }

    /// Summed rate from eigenstate `k` into eigenstate `j`.
    pub fn transfer_rate(&self, j: usize, k: usize) -> f64 {
        self.transfer[j * self.basis.dim() + k]
    }

    /// `dρ/dt` with `ρ` and the result in the dressed basis.
    pub fn frame_rhs(&self, t: f64, rho: &CMat) -> CMat {
        let d = self.basis.dim();
        let e = self.basis.energies();
        let mut out = CMat::from_fn(d, d, |m, n| {
            rho[(m, n)] * C64::new(-0.5 * (self.kappa[m] + self.kappa[n]), e[n] - e[m])
        });
        for m in 0..d {
            let row = &self.transfer[m * d..(m + 1) * d];
            let gain: C64 = row.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(k, w)| rho[(k, k)] * *w).sum();
            out[(m, m)] += gain;
        }
        if let Some(pulse) = &self.drive {
            let f = pulse.field(t);
            if f != 0.0 {
                let s = &self.drive_frame;
                let comm = rho * s - s * rho;
                let i_f = C64::new(0.0, f);
                for n in 0..d {
                    for m in 0..d {
                        out[(m, n)] += i_f * comm[(m, n)];
                    }
                }
            }
        }
        out
    }

    /// `e^{iE_m τ}` for every eigenstate.
    fn phases(&self, tau: f64) -> Vec<C64> {
        self.basis.energies().iter().map(|e| C64::from_polar(1.0, e * tau)).collect()
    }

    /// Right-hand side for `ρ̃_mn = e^{−i(E_n−E_m)(t−t0)} ρ_mn`, the interaction
    /// picture of the dressed energies. Free of oscillation unless driven.
    fn interaction_rhs(&self, t: f64, t0: f64, rho: &CMat) -> CMat {
        let d = self.basis.dim();
        let mut out = CMat::from_fn(d, d, |m, n| rho[(m, n)] * (-0.5 * (self.kappa[m] + self.kappa[n])));
        for m in 0..d {
            let row = &self.transfer[m * d..(m + 1) * d];
            let gain: C64 = row.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(k, w)| rho[(k, k)] * *w).sum();
            out[(m, m)] += gain;
        }
        if let Some(pulse) = &self.drive {
            let f = pulse.field(t);
            if f != 0.0 {
                let p = self.phases(t - t0);
                let s = CMat::from_fn(d, d, |m, k| self.drive_frame[(m, k)] * p[m] * p[k].conj());
                let comm = rho * &s - &s * rho;
                let i_f = C64::new(0.0, f);
                for n in 0..d {
                    for m in 0..d {
                        out[(m, n)] += i_f * comm[(m, n)];
                    }
                }
            }
        }
        out
    }

    /// Back from the interaction picture at time `t`.
    fn from_interaction(&self, t: f64, t0: f64, y: &CMat) -> CMat {
        let p = self.phases(t - t0);
        CMat::from_fn(y.nrows(), y.ncols(), |m, n| y[(m, n)] * p[m].conj() * p[n])
    }
}

/// `dρ/dt = i[ρ, H + H_p(t)] + Σ Γ D[|j⟩⟨k|]ρ` in the bare basis.
pub fn apply_generator(generator: &LindbladGenerator, rho: &DensityMatrix, t: f64) -> Result<CMat> {
    if rho.dims() != generator.dims() {
        return Err(Error::DimensionMismatch { expected: generator.dims().dim(), found: rho.dims().dim() });
    }
    let basis = generator.basis();
    let frame = linalg::to_frame(basis.states(), rho.matrix());
    Ok(linalg::from_frame(basis.states(), &generator.frame_rhs(t, &frame)))
}

/// Reference right-hand side built directly from dense operators:
/// `i[ρ, H] + Σ_c γ_c (O ρ O† − ½{O†O, ρ})`.
pub fn lindblad_rhs_dense(hamiltonian: &CMat, jumps: &[(CMat, f64)], rho: &CMat) -> CMat {
    let i = C64::new(0.0, 1.0);
    let mut out = linalg::scale(&(rho * hamiltonian - hamiltonian * rho), i);
    for (op, rate) in jumps {
        let od = linalg::adjoint(op);
        let odo = &od * op;
        let term = op * rho * &od - linalg::scale(&(&odo * rho + rho * &odo), C64::new(0.5, 0.0));
        out = out + linalg::scale(&term, C64::new(*rate, 0.0));
    }
    out
}

/// Integrator tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-10 }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn lincomb(y: &CMat, h: f64, coeffs: &[f64], ks: &[CMat]) -> CMat {
    CMat::from_fn(y.nrows(), y.ncols(), |i, j| {
        let mut acc = ZERO;
        for (c, k) in coeffs.iter().zip(ks) {
            if *c != 0.0 {
                acc += k[(i, j)] * *c;
            }
        }
        y[(i, j)] + acc * h
    })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

/// Adaptive Dormand–Prince integration of `ẏ = f(t, y)`, landing exactly on each
/// grid point and handing the state there to `emit`.
fn integrate<F, G>(f: F, y0: CMat, grid: &[f64], tol: Tolerances, mut emit: G) -> Result<()>
where
    F: Fn(f64, &CMat) -> CMat,
    G: FnMut(usize, f64, &CMat) -> Result<()>,
{
    validate_grid(grid)?;
    let mut t = grid[0];
    let mut y = y0;
    emit(0, t, &y)?;
    if grid.len() == 1 {
        return Ok(());
    }
    let span = grid[grid.len() - 1] - grid[0];
    let mut h = (1e-3 * span).min(grid[1] - grid[0]).max(1e-6);
    let mut k1 = f(t, &y);
    for (idx, &target) in grid.iter().enumerate().skip(1) {
        while t < target {
            let clipped = t + h >= target;
            let step = if clipped { target - t } else { h };
            let mut ks: Vec<CMat> = Vec::with_capacity(7);
            ks.push(k1.clone());
            for s in 1..7 {
                let ys = lincomb(&y, step, &A[s][..s], &ks);
                ks.push(f(t + C[s] * step, &ys));
            }
            let y_new = lincomb(&y, step, &A[6][..6], &ks[..6]);
            let err = lincomb(&CMat::zeros(y.nrows(), y.ncols()), step, &E, &ks);

            // Max norm: an RMS over mostly-empty matrices would dilute localised errors.
            let mut err_norm = 0.0f64;
            for j in 0..y.ncols() {
                for i in 0..y.nrows() {
                    let sc = tol.atol + tol.rtol * y[(i, j)].norm().max(y_new[(i, j)].norm());
                    err_norm = err_norm.max(err[(i, j)].norm() / sc);
                }
            }
            if !err_norm.is_finite() {
                return Err(Error::StepSizeUnderflow { t, h: step });
            }
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            if err_norm <= 1.0 {
                t = if clipped { target } else { t + step };
                y = y_new;
                k1 = ks.swap_remove(6);
                if !clipped || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                h = step * factor.min(1.0);
            }
            if h < 1e-12 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, h });
            }
        }
        emit(idx, t, &y)?;
    }
    Ok(())
}

/// Density-matrix snapshots on a time grid, stored in the dressed basis.
#[derive(Debug, Clone)]
pub struct Trajectory {
    dims: SpaceDims,
    frame: CMat,
    times: Vec<f64>,
    states: Vec<CMat>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Snapshot `i` in the dressed basis of the generator.
    pub fn frame_state(&self, i: usize) -> &CMat {
        &self.states[i]
    }

    pub fn frame_states(&self) -> &[CMat] {
        &self.states
    }

    /// Snapshot `i` in the bare basis.
    pub fn state(&self, i: usize) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.dims, linalg::from_frame(&self.frame, &self.states[i]))
            .expect("snapshot has the generator's dimension")
    }

    pub fn final_state(&self) -> DensityMatrix {
        self.state(self.len() - 1)
    }

    /// Population of dressed eigenstate `j` at every snapshot.
    pub fn population(&self, j: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[(j, j)].re).collect()
    }
}

fn is_diagonal(m: &CMat) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| i == j || m[(i, j)] == ZERO))
}

fn check_positivity(t: f64, rho: &CMat) -> Result<()> {
    let min = if is_diagonal(rho) {
        (0..rho.nrows()).map(|i| rho[(i, i)].re).fold(f64::INFINITY, f64::min)
    } else {
        linalg::min_eigenvalue(rho)?
    };
    if min < POSITIVITY_ABORT {
        return Err(Error::PositivityViolation { t, min_eigenvalue: min });
    }
    Ok(())
}

/// Integrates the master equation from `rho0` at `t_grid[0]` with default tolerances.
pub fn evolve(generator: &LindbladGenerator, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Trajectory> {
    evolve_with(generator, rho0, t_grid, Tolerances::default())
}

pub fn evolve_with(generator: &LindbladGenerator, rho0: &DensityMatrix, t_grid: &[f64], tol: Tolerances) -> Result<Trajectory> {
    if rho0.dims() != generator.dims() {
        return Err(Error::DimensionMismatch { expected: generator.dims().dim(), found: rho0.dims().dim() });
    }
    let frame = generator.basis().states().clone();
    let y0 = linalg::to_frame(&frame, rho0.matrix());
    evolve_frame(generator, y0, t_grid, tol)
}

/// As [`evolve_with`], with the initial state already in the dressed basis.
/// The integration runs in the interaction picture of the dressed energies, so
/// free phases are exact and the step size follows only decay and drive.
pub fn evolve_frame(generator: &LindbladGenerator, rho0: CMat, t_grid: &[f64], tol: Tolerances) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(t_grid.len());
    let t0 = t_grid.first().copied().unwrap_or(0.0);
    integrate(|t, y| generator.interaction_rhs(t, t0, y), rho0, t_grid, tol, |_, t, y| {
        let sym = linalg::hermitian_part(&generator.from_interaction(t, t0, y));
        check_positivity(t, &sym)?;
        states.push(sym);
        Ok(())
    })?;
    Ok(Trajectory { dims: generator.dims(), frame: generator.basis().states().clone(), times: t_grid.to_vec(), states })
}

/// Reference propagation `exp(L t) vec(ρ₀)` through the dense `dim² × dim²` generator.
pub fn superop_oracle(generator: &LindbladGenerator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if generator.drive().is_some() {
        return Err(Error::DriveNotSupported);
    }
    let d = generator.dims().dim();
    if d * d > SUPEROP_LIMIT {
        return Err(Error::MemoryBound { dim: d, limit: SUPEROP_LIMIT });
    }
    if rho0.dims() != generator.dims() {
        return Err(Error::DimensionMismatch { expected: d, found: rho0.dims().dim() });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let l = superoperator(generator);
    let prop = expm(&linalg::scale(&l, C64::new(t, 0.0)))?;
    let vec0 = CMat::from_fn(d * d, 1, |idx, _| rho0.matrix()[(idx % d, idx / d)]);
    let out = &prop * &vec0;
    DensityMatrix::from_matrix_unchecked(generator.dims(), CMat::from_fn(d, d, |r, c| out[(r + c * d, 0)]))
}

/// Column-stacking matrix of the undriven generator in the bare basis.
pub fn superoperator(generator: &LindbladGenerator) -> CMat {
    let d = generator.dims().dim();
    let h = generator.hamiltonian().matrix();
    let v = generator.basis().states();
    let id = linalg::identity(d);

    let kappa_op = CMat::from_fn(d, d, |r, c| (0..d).map(|k| v[(r, k)] * v[(c, k)].conj() * generator.kappa[k]).sum::<C64>());
    let eff = h - linalg::scale(&kappa_op, C64::new(0.0, 0.5));
    // −i(I⊗H_eff − H_eff^*ᵀ⊗I) with H_eff = H − iK/2 reproduces −i[H,ρ] − ½{K,ρ}.
    let left = linalg::kron(&id, &eff);
    let right = linalg::kron(&linalg::transpose(&linalg::adjoint(&eff)), &id);
    let mut l = linalg::scale(&(&left - &right), C64::new(0.0, -1.0));

    let u = CMat::from_fn(d * d, d, |idx, j| v[(idx / d, j)].conj() * v[(idx % d, j)]);
    let w = CMat::from_fn(d, d, |j, k| C64::new(generator.transfer[j * d + k], 0.0));
    let jump = &u * (&w * linalg::adjoint(&u));
    l = l + jump;
    l
}

/// Exact propagator of the undriven generator in the dressed basis.
#[derive(Debug, Clone)]
pub struct FreePropagator {
    lambda: CMat,
    rates: CMat,
}

impl FreePropagator {
    pub fn new(generator: &LindbladGenerator) -> Result<Self> {
        if generator.drive().is_some() {
            return Err(Error::DriveNotSupported);
        }
        let d = generator.basis().dim();
        let e = generator.basis().energies();
        let k = &generator.kappa;
        let lambda = CMat::from_fn(d, d, |m, n| C64::new(-0.5 * (k[m] + k[n]), e[n] - e[m]));
        let rates = CMat::from_fn(d, d, |j, i| {
            C64::new(generator.transfer[j * d + i] - if i == j { k[i] } else { 0.0 }, 0.0)
        });
        Ok(Self { lambda, rates })
    }

    pub fn dim(&self) -> usize {
        self.lambda.nrows()
    }

    /// Coherence factor `e^{λ_mn τ}` for `m ≠ n`.
    pub fn coherence_factor(&self, m: usize, n: usize, tau: f64) -> C64 {
        (self.lambda[(m, n)] * tau).exp()
    }

    /// Population transfer matrix `exp(R τ)`.
    pub fn population_propagator(&self, tau: f64) -> Result<CMat> {
        expm(&linalg::scale(&self.rates, C64::new(tau, 0.0)))
    }

    /// `Λ_τ(x)` for any (not necessarily Hermitian) `x` in the dressed basis.
    pub fn propagate(&self, x: &CMat, tau: f64) -> Result<CMat> {
        let p = self.population_propagator(tau)?;
        Ok(self.propagate_with(x, tau, &p))
    }

    fn propagate_with(&self, x: &CMat, tau: f64, p: &CMat) -> CMat {
        let d = self.dim();
        let mut out = CMat::from_fn(d, d, |m, n| if m == n { ZERO } else { x[(m, n)] * self.coherence_factor(m, n, tau) });
        for m in 0..d {
            out[(m, m)] = (0..d).map(|k| p[(m, k)] * x[(k, k)]).sum();
        }
        out
    }

    /// Fixed-step stepper reusing `exp(R h)` and `e^{λh}`.
    pub fn stepper(&self, h: f64) -> Result<FreeStepper> {
        let d = self.dim();
        let phase = CMat::from_fn(d, d, |m, n| (self.lambda[(m, n)] * h).exp());
        Ok(FreeStepper { phase, populations: self.population_propagator(h)? })
    }

    /// Population propagator transposed, for propagating observables backwards.
    pub fn rates(&self) -> &CMat {
        &self.rates
    }
}

/// One fixed step of a [`FreePropagator`].
#[derive(Debug, Clone)]
pub struct FreeStepper {
    phase: CMat,
    populations: CMat,
}

impl FreeStepper {
    pub fn step(&self, x: &CMat) -> CMat {
        let d = x.nrows();
        let mut out = CMat::from_fn(d, d, |m, n| if m == n { ZERO } else { x[(m, n)] * self.phase[(m, n)] });
        for m in 0..d {
            out[(m, m)] = (0..d).map(|k| self.populations[(m, k)] * x[(k, k)]).sum();
        }
        out
    }

    /// `exp(R h)`.
    pub fn population_step(&self) -> &CMat {
        &self.populations
    }
}

fn check_tau_grid(tau_grid: &[f64]) -> Result<()> {
    validate_grid(tau_grid)?;
    if tau_grid[0] < 0.0 {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

/// `C(τ) = Tr[B Λ_τ(ρ A)]` by adaptive integration of the regression equation.
pub fn two_time_correlation(
    generator: &LindbladGenerator,
    rho_t: &DensityMatrix,
    a: &Operator,
    b: &Operator,
    tau_grid: &[f64],
) -> Result<Vec<C64>> {
    if generator.drive().is_some() {
        return Err(Error::DriveNotSupported);
    }
    check_tau_grid(tau_grid)?;
    let basis = generator.basis();
    let x0 = basis.to_frame(&Operator::new_unchecked(rho_t.dims(), rho_t.matrix() * a.matrix()));
    let bf = basis.to_frame(b);
    let mut out = vec![ZERO; tau_grid.len()];
    let x_start = if tau_grid[0] > 0.0 {
        FreePropagator::new(generator)?.propagate(&x0, tau_grid[0])?
    } else {
        x0
    };
    let rel: Vec<f64> = tau_grid.iter().map(|t| t - tau_grid[0]).collect();
    integrate(|t, y| generator.interaction_rhs(t, 0.0, y), x_start, &rel, Tolerances::default(), |i, t, y| {
        out[i] = linalg::trace_product(&bf, &generator.from_interaction(t, 0.0, y));
        Ok(())
    })?;
    Ok(out)
}

/// As [`two_time_correlation`], using the exact free propagator.
pub fn two_time_correlation_exact(
    generator: &LindbladGenerator,
    rho_t: &DensityMatrix,
    a: &Operator,
    b: &Operator,
    tau_grid: &[f64],
) -> Result<Vec<C64>> {
    check_tau_grid(tau_grid)?;
    let prop = FreePropagator::new(generator)?;
    let basis = generator.basis();
    let x0 = basis.to_frame(&Operator::new_unchecked(rho_t.dims(), rho_t.matrix() * a.matrix()));
    let bf = basis.to_frame(b);
    tau_grid.iter().map(|&tau| Ok(linalg::trace_product(&bf, &prop.propagate(&x0, tau)?))).collect()
}

/// Default integration horizon `8 / min γ_c` over the nonzero rates.
pub fn default_horizon(params: &ModelParams) -> Option<f64> {
    params.min_positive_rate().map(|g| 8.0 / g)
}

/// Fills unset pulse settings from the dressed spectrum: the carrier defaults to
/// `E(|0̃⟩) − E(ground)` and the amplitude to the π-area value for that line.
pub fn resolve_pulse(drive: &DriveParams, basis: &DressedBasis) -> Result<Pulse> {
    drive.validate()?;
    let t0 = basis.index_tilde0();
    let omega_s = drive.omega_s.unwrap_or(basis.energies()[t0] - basis.energies()[0]);
    let amplitude = match drive.amplitude {
        Some(a) => a,
        None => {
            let s = basis.to_frame(&hilbert::atomic_flip(basis.dims(), Level::G, Level::L));
            let m = s[(t0, 0)].norm();
            if m < 1e-12 {
                return Err(Error::InvalidParameter { name: "amplitude", reason: "the |0> -> |0~> transition is dark; set it explicitly".into() });
            }
            (std::f64::consts::PI / 2.0).sqrt() / (drive.sigma * m)
        }
    };
    let t_center = drive.t_center.unwrap_or(4.0 * drive.sigma);
    Ok(Pulse { sigma: drive.sigma, omega_s, amplitude, t_center })
}

/// State after a preparation pulse.
#[derive(Debug, Clone)]
pub struct Preparation {
    pub pulse: Pulse,
    /// End of the pulse window, where `state` is taken.
    pub t_end: f64,
    pub state: DensityMatrix,
    /// `⟨0̃|ρ|0̃⟩` at `t_end`.
    pub fidelity: f64,
}

/// Drives the global ground state through the pulse window `[0, t_c + 6σ]`.
pub fn prepare_tilde0(generator: &LindbladGenerator, drive: &DriveParams) -> Result<Preparation> {
    let basis = generator.basis();
    let pulse = resolve_pulse(drive, basis)?;
    let driven = generator.clone().with_drive(pulse);
    let t_end = pulse.window_end();
    let d = basis.dim();
    let mut ground = CMat::zeros(d, d);
    ground[(0, 0)] = C64::new(1.0, 0.0);
    let traj = evolve_frame(&driven, ground, &[0.0, t_end], Tolerances::default())?;
    let fidelity = traj.frame_state(1)[(basis.index_tilde0(), basis.index_tilde0())].re;
    Ok(Preparation { pulse, t_end, state: traj.final_state(), fidelity })
}

/// `|j⟩⟨j|` for dressed eigenstate `j`, in the bare basis.
pub fn eigenstate_projector(basis: &DressedBasis, j: usize) -> DensityMatrix {
    basis.state(j).projector()
}
