//! Truncated Hilbert space `photon ⊗ phonon ⊗ atom` and its elementary
//! operators.
//!
//! Bare states are written `|n_a, n_b, α⟩` with the atomic levels ordered
//! `l, g, e` (ascending bare energy). The flat index of a bare state is
//! `(n_a · n_b_levels + n_b) · 3 + α`, i.e. the photon factor is outermost.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{CMat, Error, Result, C64};

/// Number of atomic levels; fixed.
pub const ATOM_LEVELS: usize = 3;

/// Truncation of the two bosonic Fock spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDims {
    /// Photon Fock levels (maximum photon number + 1).
    pub n_a_levels: usize,
    /// Phonon Fock levels (maximum phonon number + 1).
    pub n_b_levels: usize,
}

impl Default for SpaceDims {
    fn default() -> Self {
        Self { n_a_levels: 5, n_b_levels: 5 }
    }
}

impl SpaceDims {
    pub fn new(n_a_levels: usize, n_b_levels: usize) -> Result<Self> {
        let dims = Self { n_a_levels, n_b_levels };
        dims.validate()?;
        Ok(dims)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_a_levels == 0 || self.n_b_levels == 0 {
            return Err(Error::InvalidDims(format!(
                "Fock truncations must be positive (got n_a_levels = {}, n_b_levels = {})",
                self.n_a_levels, self.n_b_levels
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_a_levels * self.n_b_levels * ATOM_LEVELS
    }

    pub fn index(&self, n_a: usize, n_b: usize, level: Level) -> usize {
        debug_assert!(n_a < self.n_a_levels && n_b < self.n_b_levels);
        (n_a * self.n_b_levels + n_b) * ATOM_LEVELS + level as usize
    }

    /// Inverse of [`SpaceDims::index`].
    pub fn labels(&self, index: usize) -> (usize, usize, Level) {
        let level = Level::from_index(index % ATOM_LEVELS);
        let boson = index / ATOM_LEVELS;
        (boson / self.n_b_levels, boson % self.n_b_levels, level)
    }

    fn check(&self, other: &SpaceDims) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

/// Atomic level, ordered by bare energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    L = 0,
    G = 1,
    E = 2,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::L, Level::G, Level::E];

    fn from_index(i: usize) -> Level {
        Self::ALL[i]
    }

    /// Eigenvalue of σ_z under the convention σ_z = σ_ee − σ_gg − σ_ll.
    pub fn sigma_z(self) -> f64 {
        match self {
            Level::E => 1.0,
            Level::G | Level::L => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Photon,
    Phonon,
}

/// Dense operator on the full tensor space.
#[derive(Debug, Clone)]
pub struct Operator {
    dims: SpaceDims,
    matrix: CMat,
}

impl Operator {
    pub fn from_matrix(dims: SpaceDims, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != dims.dim() || matrix.ncols() != dims.dim() {
            return Err(Error::DimensionMismatch { expected: dims.dim(), found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Self { dims, matrix })
    }

    pub(crate) fn new_unchecked(dims: SpaceDims, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.dim());
        Self { dims, matrix }
    }

    pub fn zeros(dims: SpaceDims) -> Self {
        Self::new_unchecked(dims, linalg::zeros(dims.dim()))
    }

    pub fn identity(dims: SpaceDims) -> Self {
        Self::new_unchecked(dims, linalg::identity(dims.dim()))
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self::new_unchecked(self.dims, linalg::adjoint(&self.matrix))
    }

    pub fn scaled(&self, s: impl Into<C64>) -> Self {
        Self::new_unchecked(self.dims, linalg::scale(&self.matrix, s.into()))
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Self::new_unchecked(self.dims, linalg::commutator(&self.matrix, &other.matrix))
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.dims.check(&state.dims)?;
        let n = self.dims.dim();
        let amplitudes = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * state.amplitudes[j]).sum())
            .collect();
        Ok(StateVector { dims: self.dims, amplitudes })
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dimension mismatch");
        Operator::new_unchecked(self.dims, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dimension mismatch");
        Operator::new_unchecked(self.dims, &self.matrix - &rhs.matrix)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dims, rhs.dims, "operator dimension mismatch");
        Operator::new_unchecked(self.dims, &self.matrix * &rhs.matrix)
    }
}

/// Pure state in the bare basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    dims: SpaceDims,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(dims: SpaceDims, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dims.dim() {
            return Err(Error::DimensionMismatch { expected: dims.dim(), found: amplitudes.len() });
        }
        Ok(Self { dims, amplitudes })
    }

    /// The bare state `|n_a, n_b, level⟩`.
    pub fn basis(dims: SpaceDims, n_a: usize, n_b: usize, level: Level) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dims.dim()];
        amplitudes[dims.index(n_a, n_b, level)] = C64::new(1.0, 0.0);
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|ψ⟩⟨ψ|`, renormalised.
    pub fn projector(&self) -> DensityMatrix {
        let n2 = self.norm().powi(2);
        let a = &self.amplitudes;
        let matrix = CMat::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj() / n2);
        DensityMatrix { dims: self.dims, matrix }
    }
}

/// Density matrix in the bare basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: SpaceDims,
    matrix: CMat,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    /// Validated constructor.
    pub fn new(dims: SpaceDims, matrix: CMat) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(dims, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape-checked only; physical invariants are not enforced.
    pub fn from_matrix_unchecked(dims: SpaceDims, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != dims.dim() || matrix.ncols() != dims.dim() {
            return Err(Error::DimensionMismatch { expected: dims.dim(), found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Self { dims, matrix })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermitian_deviation(&self.matrix);
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr:.12} differs from 1")));
        }
        let min = linalg::min_eigenvalue(&self.matrix)?;
        if min < -Self::POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }

    pub fn population(&self, state: &StateVector) -> f64 {
        let a = state.amplitudes();
        let n = a.len();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += a[i].conj() * self.matrix[(i, j)] * a[j];
            }
        }
        acc.re
    }
}

/// Single-mode annihilation operator embedded in the full space.
pub fn annihilator(dims: SpaceDims, mode: Mode) -> Operator {
    let n = dims.dim();
    let mut m = linalg::zeros(n);
    for col in 0..n {
        let (na, nb, level) = dims.labels(col);
        match mode {
            Mode::Photon if na > 0 => m[(dims.index(na - 1, nb, level), col)] = C64::new((na as f64).sqrt(), 0.0),
            Mode::Phonon if nb > 0 => m[(dims.index(na, nb - 1, level), col)] = C64::new((nb as f64).sqrt(), 0.0),
            _ => {}
        }
    }
    Operator::new_unchecked(dims, m)
}

pub fn creator(dims: SpaceDims, mode: Mode) -> Operator {
    annihilator(dims, mode).dagger()
}

/// `c + c†` for the given mode.
pub fn quadrature(dims: SpaceDims, mode: Mode) -> Operator {
    let a = annihilator(dims, mode);
    &a + &a.dagger()
}

pub fn number_operator(dims: SpaceDims, mode: Mode) -> Operator {
    let a = annihilator(dims, mode);
    &a.dagger() * &a
}

/// N̂ = a†a + b†b.
pub fn total_number(dims: SpaceDims) -> Operator {
    &number_operator(dims, Mode::Photon) + &number_operator(dims, Mode::Phonon)
}

/// `σ = |to⟩⟨from|` on the atom, identity on both boson factors.
pub fn atomic_operator(dims: SpaceDims, from: Level, to: Level) -> Operator {
    let n = dims.dim();
    let mut m = linalg::zeros(n);
    for na in 0..dims.n_a_levels {
        for nb in 0..dims.n_b_levels {
            m[(dims.index(na, nb, to), dims.index(na, nb, from))] = C64::new(1.0, 0.0);
        }
    }
    Operator::new_unchecked(dims, m)
}

/// `σ_{αβ} + σ_{βα}` between two atomic levels.
pub fn atomic_flip(dims: SpaceDims, a: Level, b: Level) -> Operator {
    &atomic_operator(dims, a, b) + &atomic_operator(dims, b, a)
}

/// σ_z = σ_ee − σ_gg, extended with σ_z|l⟩ = −|l⟩.
pub fn sigma_z(dims: SpaceDims) -> Operator {
    let mut m = linalg::zeros(dims.dim());
    for i in 0..dims.dim() {
        m[(i, i)] = C64::new(dims.labels(i).2.sigma_z(), 0.0);
    }
    Operator::new_unchecked(dims, m)
}

/// `exp(iπN̂)`; diagonal with entries `(−1)^{n_a + n_b}`.
pub fn number_parity(dims: SpaceDims) -> Operator {
    let mut m = linalg::zeros(dims.dim());
    for i in 0..dims.dim() {
        let (na, nb, _) = dims.labels(i);
        m[(i, i)] = C64::new(if (na + nb) % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Operator::new_unchecked(dims, m)
}

/// Parity Π = −σ_z exp(iπN̂).
pub fn parity_operator(dims: SpaceDims) -> Operator {
    (&sigma_z(dims) * &number_parity(dims)).scaled(-1.0)
}

/// `Tr[op · ρ]`.
pub fn expectation(op: &Operator, state: &DensityMatrix) -> Result<C64> {
    op.dims.check(&state.dims)?;
    Ok(linalg::trace_product(&op.matrix, &state.matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-12
    }

    fn dims() -> SpaceDims {
        SpaceDims::default()
    }

    #[test]
    fn rejects_empty_truncation() {
        assert!(SpaceDims::new(0, 5).is_err());
        assert_eq!(SpaceDims::new(5, 5).unwrap().dim(), 75);
    }

    #[test]
    fn index_round_trips() {
        let d = SpaceDims::new(4, 3).unwrap();
        for i in 0..d.dim() {
            let (na, nb, l) = d.labels(i);
            assert_eq!(d.index(na, nb, l), i);
        }
    }

    #[test]
    fn photon_annihilator_lowers_fock_state() {
        let d = dims();
        let a = annihilator(d, Mode::Photon);
        let out = a.apply(&StateVector::basis(d, 1, 0, Level::G)).unwrap();
        let target = StateVector::basis(d, 0, 0, Level::G);
        assert!(close(target.inner(&out), 1.0));
        assert!((out.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn photon_annihilator_kills_vacuum() {
        let d = dims();
        let a = annihilator(d, Mode::Photon);
        for level in Level::ALL {
            let out = a.apply(&StateVector::basis(d, 0, d.n_b_levels - 1, level)).unwrap();
            assert!(out.norm() < 1e-15);
        }
    }

    #[test]
    fn truncated_commutator_has_negative_tail() {
        let d = dims();
        let a = annihilator(d, Mode::Photon);
        let c = a.commutator(&a.dagger());
        for na in 0..d.n_a_levels {
            let i = d.index(na, 0, Level::G);
            let expected = if na == d.n_a_levels - 1 { -4.0 } else { 1.0 };
            assert!(close(c.get(i, i), expected), "n_a = {na}: {:?}", c.get(i, i));
        }
    }

    #[test]
    fn atomic_operators_act_on_atom_only() {
        let d = dims();
        let gg = atomic_operator(d, Level::G, Level::G);
        let eg = atomic_operator(d, Level::G, Level::E);
        let g0 = StateVector::basis(d, 0, 0, Level::G);
        let e0 = StateVector::basis(d, 0, 0, Level::E);
        assert!(close(g0.inner(&gg.apply(&g0).unwrap()), 1.0));
        assert!(close(e0.inner(&eg.apply(&g0).unwrap()), 1.0));
        assert!(eg.apply(&StateVector::basis(d, 0, 0, Level::L)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn parity_convention() {
        let d = dims();
        let p = parity_operator(d);
        let g00 = StateVector::basis(d, 0, 0, Level::G);
        let g10 = StateVector::basis(d, 1, 0, Level::G);
        assert!(close(g00.inner(&p.apply(&g00).unwrap()), 1.0));
        assert!(close(g10.inner(&p.apply(&g10).unwrap()), -1.0));
        let l00 = StateVector::basis(d, 0, 0, Level::L).projector();
        assert!(close(expectation(&p, &l00).unwrap(), 1.0));
    }

    #[test]
    fn parity_is_hermitian_unitary_involution() {
        let d = dims();
        let p = parity_operator(d);
        let sq = &p * &p;
        assert!((&sq - &Operator::identity(d)).max_abs() < 1e-15);
        assert!(p.is_hermitian(0.0));
        let n = total_number(d);
        assert!(n.commutator(&number_parity(d)).max_abs() < 1e-15);
    }

    #[test]
    fn different_modes_commute() {
        let d = SpaceDims::new(4, 3).unwrap();
        let a = annihilator(d, Mode::Photon);
        let b = annihilator(d, Mode::Phonon);
        assert_eq!(a.commutator(&b).max_abs(), 0.0);
        assert_eq!(a.commutator(&b.dagger()).max_abs(), 0.0);
        let s = atomic_flip(d, Level::E, Level::G);
        assert_eq!(a.commutator(&s).max_abs(), 0.0);
        assert_eq!(b.commutator(&s).max_abs(), 0.0);
    }

    #[test]
    fn expectation_values() {
        let d = dims();
        let rho = StateVector::basis(d, 2, 0, Level::G).projector();
        let n = number_operator(d, Mode::Photon);
        assert!(close(expectation(&n, &rho).unwrap(), 2.0));
        assert!(close(expectation(&Operator::identity(d), &rho).unwrap(), 1.0));
        let other = SpaceDims::new(3, 3).unwrap();
        assert!(expectation(&Operator::identity(other), &rho).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let d = SpaceDims::new(2, 2).unwrap();
        let mut m = linalg::identity(d.dim());
        assert!(DensityMatrix::new(d, m.clone()).is_err());
        for i in 0..d.dim() {
            m[(i, i)] = C64::new(1.0 / d.dim() as f64, 0.0);
        }
        assert!(DensityMatrix::new(d, m.clone()).is_ok());
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(d, m).is_err());
    }
}
