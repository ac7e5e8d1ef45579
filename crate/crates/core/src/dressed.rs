//! Dressed eigenbasis, positive-frequency operators and global jump channels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hilbert::{self, Level, Mode, Operator, SpaceDims, StateVector};
use crate::linalg;
use crate::model::{self, ModelParams};
use crate::{CMat, Error, Result, C64};

/// Transitions with `E_k − E_j` at or below this are treated as degenerate.
pub const OMEGA_CUT: f64 = 1e-6;
/// Channels with `rate ≤ RATE_CUT · γ_c` are dropped.
pub const RATE_CUT: f64 = 1e-12;
/// Eigenvalues closer than this (relative to the spectral scale) form one block.
const DEGENERACY_TOL: f64 = 1e-10;
/// Minimum `|⟨v|Π|v⟩|` for a parity label to be accepted.
const PARITY_THRESHOLD: f64 = 0.999;
/// Maximum `|l⟩`-sector weight allowed for `|0̃⟩`.
const TILDE0_L_WEIGHT: f64 = 1e-10;

/// Dissipation channel, identified by its system operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelId {
    /// Plasmon, `a + a†`.
    A,
    /// Phonon, `b + b†`.
    B,
    /// Upper atomic transition, `σ_eg + σ_ge`.
    Eg,
    /// Lower atomic transition, `σ_gl + σ_lg`.
    Gl,
}

impl ChannelId {
    pub const ALL: [ChannelId; 4] = [ChannelId::A, ChannelId::B, ChannelId::Eg, ChannelId::Gl];

    pub fn label(self) -> &'static str {
        match self {
            ChannelId::A => "a",
            ChannelId::B => "b",
            ChannelId::Eg => "eg",
            ChannelId::Gl => "gl",
        }
    }

    /// The Hermitian system operator `c + c†` that couples to the bath.
    pub fn system_operator(self, dims: SpaceDims) -> Operator {
        match self {
            ChannelId::A => hilbert::quadrature(dims, Mode::Photon),
            ChannelId::B => hilbert::quadrature(dims, Mode::Phonon),
            ChannelId::Eg => hilbert::atomic_flip(dims, Level::E, Level::G),
            ChannelId::Gl => hilbert::atomic_flip(dims, Level::G, Level::L),
        }
    }

    pub fn rate(self, params: &ModelParams) -> f64 {
        match self {
            ChannelId::A => params.gamma_a,
            ChannelId::B => params.gamma_b,
            ChannelId::Eg => params.gamma_eg,
            ChannelId::Gl => params.gamma_gl,
        }
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Eigen-decomposition of the full Hamiltonian with reproducible ordering and phases.
#[derive(Debug, Clone)]
pub struct DressedBasis {
    dims: SpaceDims,
    energies: Vec<f64>,
    states: CMat,
    parity: Vec<i8>,
    index_tilde0: usize,
}

impl DressedBasis {
    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Ascending eigenenergies.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Eigenvectors as columns, in the bare basis.
    pub fn states(&self) -> &CMat {
        &self.states
    }

    pub fn parity(&self) -> &[i8] {
        &self.parity
    }

    pub fn index_tilde0(&self) -> usize {
        self.index_tilde0
    }

    pub fn state(&self, j: usize) -> StateVector {
        let amplitudes = (0..self.dim()).map(|i| self.states[(i, j)]).collect();
        StateVector::from_amplitudes(self.dims, amplitudes).expect("column length equals dim")
    }

    /// Total weight of eigenvector `j` on bare `|n_a, n_b, l⟩` states.
    pub fn l_weight(&self, j: usize) -> f64 {
        l_weight(self.dims, &self.states, j)
    }

    /// `V† O V`: matrix elements `⟨j|O|k⟩` in the dressed basis.
    pub fn to_frame(&self, op: &Operator) -> CMat {
        linalg::to_frame(&self.states, op.matrix())
    }

    /// Inverse of [`Self::to_frame`].
    pub fn from_frame(&self, m: &CMat) -> Operator {
        Operator::new_unchecked(self.dims, linalg::from_frame(&self.states, m))
    }

    /// `X⁺` of `system_op` expressed in the dressed basis: keeps `⟨j|O|k⟩` for `E_k − E_j > ω_cut`.
    pub fn positive_part_frame(&self, system_op: &Operator) -> CMat {
        let c = self.to_frame(system_op);
        let e = &self.energies;
        CMat::from_fn(self.dim(), self.dim(), |j, k| if e[k] - e[j] > OMEGA_CUT { c[(j, k)] } else { C64::new(0.0, 0.0) })
    }
}

fn l_weight(dims: SpaceDims, states: &CMat, j: usize) -> f64 {
    (0..dims.dim()).filter(|&i| dims.labels(i).2 == Level::L).map(|i| states[(i, j)].norm_sqr()).sum()
}

/// Replaces an orthonormal basis `q` of a degenerate eigenspace with vectors
/// obtained by greedily projecting bare basis states onto it. Because bare
/// states are parity and sector eigenstates and the eigenspace is invariant
/// under both, so are the resulting vectors. Returns `(bare index, vector)`.
fn canonicalize_block(q: CMat) -> Vec<(usize, Vec<C64>)> {
    let n = q.nrows();
    let mut q = q;
    let mut out = Vec::with_capacity(q.ncols());
    while q.ncols() > 0 {
        let r = q.ncols();
        let weights: Vec<f64> = (0..n).map(|i| (0..r).map(|k| q[(i, k)].norm_sqr()).sum()).collect();
        let best = weights.iter().copied().fold(0.0, f64::max);
        let pick = weights.iter().position(|&w| w >= best * (1.0 - 1e-9)).expect("nonempty block");
        let norm = weights[pick].sqrt();
        let coeffs: Vec<C64> = (0..r).map(|k| q[(pick, k)].conj() / norm).collect();
        let v: Vec<C64> = (0..n).map(|i| (0..r).map(|k| q[(i, k)] * coeffs[k]).sum()).collect();
        out.push((pick, v));

        // Orthonormal complement of `coeffs` in C^r, by Gram–Schmidt over the unit vectors.
        let mut basis: Vec<Vec<C64>> = vec![coeffs];
        for e in 0..r {
            if basis.len() == r {
                break;
            }
            let mut w: Vec<C64> = (0..r).map(|k| if k == e { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect();
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    for (wk, bk) in w.iter_mut().zip(b) {
                        *wk -= proj * bk;
                    }
                }
            }
            let nw = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if nw > 1e-6 {
                basis.push(w.into_iter().map(|x| x / nw).collect());
            }
        }
        let rest = &basis[1..];
        q = CMat::from_fn(n, rest.len(), |i, c| (0..r).map(|k| q[(i, k)] * rest[c][k]).sum());
    }
    out.sort_by_key(|(pick, _)| *pick);
    out
}

/// Rotates a vector so its largest-magnitude component (lowest index on ties) is real positive.
fn fix_phase(v: &mut [C64]) {
    let best = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if best == 0.0 {
        return;
    }
    let i = v.iter().position(|x| x.norm() >= best * (1.0 - 1e-12)).expect("nonzero vector");
    let phase = v[i].conj() / v[i].norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
}

/// Full diagonalisation of a Hermitian `h` with deterministic ordering and phases.
pub fn diagonalize(h: &Operator) -> Result<DressedBasis> {
    let scale = h.max_abs().max(1.0);
    let deviation = h.hermitian_deviation();
    if deviation > 1e-12 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let dims = h.dims();
    let n = dims.dim();
    let (values, vectors) = linalg::eigh(&linalg::hermitian_part(h.matrix()))?;
    let tol = DEGENERACY_TOL * values.iter().fold(1.0f64, |m, e| m.max(e.abs()));

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= tol {
            end += 1;
        }
        if end - start == 1 {
            columns.push((0..n).map(|i| vectors[(i, start)]).collect());
        } else {
            let block = CMat::from_fn(n, end - start, |i, k| vectors[(i, start + k)]);
            columns.extend(canonicalize_block(block).into_iter().map(|(_, v)| v));
        }
        start = end;
    }
    for col in columns.iter_mut() {
        fix_phase(col);
    }
    let states = CMat::from_fn(n, n, |i, j| columns[j][i]);
    let parity = classify_parity_matrix(&states, hilbert::parity_operator(dims).matrix())?;
    let index_tilde0 = (0..n).find(|&j| l_weight(dims, &states, j) < TILDE0_L_WEIGHT).ok_or(Error::NoTildeZero)?;
    Ok(DressedBasis { dims, energies: values, states, parity, index_tilde0 })
}

/// Diagonalises the Hamiltonian of `params` on `dims`.
pub fn diagonalize_model(params: &ModelParams, dims: SpaceDims) -> Result<DressedBasis> {
    params.validate()?;
    diagonalize(&model::build_hamiltonian(params, dims))
}

fn classify_parity_matrix(states: &CMat, parity: &CMat) -> Result<Vec<i8>> {
    let pv = parity * states;
    (0..states.ncols())
        .map(|j| {
            let value: f64 = (0..states.nrows()).map(|i| (states[(i, j)].conj() * pv[(i, j)]).re).sum();
            if value.abs() < PARITY_THRESHOLD {
                Err(Error::MixedParity { index: j, value })
            } else {
                Ok(if value > 0.0 { 1 } else { -1 })
            }
        })
        .collect()
}

/// Sign of `⟨v_j|Π|v_j⟩` for every eigenvector.
pub fn classify_parity(basis: &DressedBasis, parity: &Operator) -> Result<Vec<i8>> {
    classify_parity_matrix(&basis.states, parity.matrix())
}

/// `X⁺ = Σ_{E_k−E_j>ω_cut} ⟨j|O|k⟩ |j⟩⟨k|` in the bare basis.
pub fn dressed_positive(basis: &DressedBasis, system_op: &Operator) -> Operator {
    basis.from_frame(&basis.positive_part_frame(system_op))
}

/// One dissipator `Γ D[|j⟩⟨k|]` of the global master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpChannel {
    pub channel_id: ChannelId,
    /// Final (lower) eigenstate.
    pub j: usize,
    /// Initial (upper) eigenstate.
    pub k: usize,
    pub rate: f64,
}

impl JumpChannel {
    /// The jump operator `|j⟩⟨k|` in the bare basis.
    pub fn operator(&self, basis: &DressedBasis) -> Operator {
        let v = basis.states();
        let n = basis.dim();
        let m = CMat::from_fn(n, n, |r, c| v[(r, self.j)] * v[(c, self.k)].conj());
        Operator::new_unchecked(basis.dims(), m)
    }
}

/// All channels with `E_k − E_j > ω_cut` and rate `γ_c |⟨j|c+c†|k⟩|²` above the cut,
/// sorted by channel, then `j`, then `k`.
pub fn jump_channels(basis: &DressedBasis, params: &ModelParams) -> Vec<JumpChannel> {
    let mut out = Vec::new();
    let e = basis.energies();
    for channel_id in ChannelId::ALL {
        let gamma = channel_id.rate(params);
        if gamma <= 0.0 {
            continue;
        }
        let c = basis.to_frame(&channel_id.system_operator(basis.dims()));
        for j in 0..basis.dim() {
            for k in 0..basis.dim() {
                if e[k] - e[j] <= OMEGA_CUT {
                    continue;
                }
                let rate = gamma * c[(j, k)].norm_sqr();
                if rate > RATE_CUT * gamma {
                    out.push(JumpChannel { channel_id, j, k, rate });
                }
            }
        }
    }
    out
}

/// One eigenvalue of one point of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub index: usize,
    pub energy: f64,
    pub parity: i8,
    /// Whether the eigenvector lives in the `|l⟩` sector.
    pub l_sector: bool,
    pub is_tilde0: bool,
}

/// Dressed spectrum as the named parameters are set jointly to each value.
pub fn spectrum_sweep(base: &ModelParams, dims: SpaceDims, parameters: &[&str], values: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &value in values {
        let mut p = *base;
        for name in parameters {
            if !p.set(name, value) {
                return Err(Error::InvalidParameter { name: "sweep.parameters", reason: format!("unknown parameter `{name}`") });
            }
        }
        let basis = diagonalize_model(&p, dims)?;
        for index in 0..basis.dim() {
            rows.push(SweepRow {
                value,
                index,
                energy: basis.energies[index],
                parity: basis.parity[index],
                l_sector: basis.l_weight(index) > 0.5,
                is_tilde0: index == basis.index_tilde0,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bare() -> ModelParams {
        ModelParams { g1: 0.0, g2: 0.0, omega_p: 0.0, ..Default::default() }
    }

    #[test]
    fn decoupled_ground_and_tilde0() {
        let d = SpaceDims::default();
        let basis = diagonalize_model(&bare(), d).unwrap();
        let ground = basis.state(0);
        assert!((ground.amplitudes()[d.index(0, 0, Level::L)] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(basis.energies()[0].abs() < 1e-12);
        let t0 = basis.index_tilde0();
        assert!((basis.energies()[t0] - 3.5).abs() < 1e-12);
        assert!((basis.state(t0).amplitudes()[d.index(0, 0, Level::G)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn decoupled_positive_part_is_annihilator() {
        let d = SpaceDims::default();
        let basis = diagonalize_model(&bare(), d).unwrap();
        let xp = dressed_positive(&basis, &ChannelId::A.system_operator(d));
        let a = hilbert::annihilator(d, Mode::Photon);
        assert!((&xp - &a).max_abs() < 1e-12);
    }

    #[test]
    fn phase_convention_and_orthonormality() {
        let d = SpaceDims::new(3, 3).unwrap();
        let basis = diagonalize_model(&ModelParams::default(), d).unwrap();
        let v = basis.states();
        let gram = &linalg::adjoint(v) * v;
        assert!(linalg::max_abs(&(&gram - linalg::identity(d.dim()))) < 1e-10);
        for j in 0..d.dim() {
            let col: Vec<C64> = (0..d.dim()).map(|i| v[(i, j)]).collect();
            let best = col.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let i = col.iter().position(|x| x.norm() >= best * (1.0 - 1e-12)).unwrap();
            assert!(col[i].im.abs() < 1e-14 && col[i].re > 0.0);
        }
    }

    #[test]
    fn canonical_block_picks_bare_states() {
        // A 2-d subspace spanned by rotated copies of e0 and e2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = CMat::from_fn(3, 2, |i, k| match (i, k) {
            (0, 0) => C64::new(s, 0.0),
            (2, 0) => C64::new(0.0, s),
            (0, 1) => C64::new(s, 0.0),
            (2, 1) => C64::new(0.0, -s),
            _ => C64::new(0.0, 0.0),
        });
        let out = canonicalize_block(q);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, 0);
        assert_eq!(out[1].0, 2);
        assert!((out[0].1[0].norm() - 1.0).abs() < 1e-12);
        assert!((out[1].1[2].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channel_ordering_and_bare_rate() {
        let d = SpaceDims::new(3, 3).unwrap();
        let p = bare();
        let basis = diagonalize_model(&p, d).unwrap();
        let channels = jump_channels(&basis, &p);
        let keys: Vec<_> = channels.iter().map(|c| (c.channel_id, c.j, c.k)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let find = |state: (usize, usize, Level)| {
            (0..basis.dim()).find(|&j| basis.states()[(d.index(state.0, state.1, state.2), j)].norm() > 0.999).unwrap()
        };
        let (j, k) = (find((0, 0, Level::G)), find((1, 0, Level::G)));
        let ch = channels.iter().find(|c| c.channel_id == ChannelId::A && c.j == j && c.k == k).unwrap();
        assert!((ch.rate - p.gamma_a).abs() < 1e-14);
    }

    #[test]
    fn zero_rates_give_no_channels() {
        let p = ModelParams { gamma_a: 0.0, gamma_b: 0.0, gamma_eg: 0.0, gamma_gl: 0.0, ..Default::default() };
        let basis = diagonalize_model(&p, SpaceDims::new(2, 2).unwrap()).unwrap();
        assert!(jump_channels(&basis, &p).is_empty());
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let d = SpaceDims::new(2, 2).unwrap();
        let a = hilbert::annihilator(d, Mode::Photon);
        assert!(matches!(diagonalize(&a), Err(Error::NotHermitian { .. })));
    }
}
