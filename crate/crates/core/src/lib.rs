//! Dressed-state simulation of a three-level atom ultrastrongly coupled to a
//! plasmon mode and a phonon mode.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: the truncated photon ⊗ phonon ⊗ atom space and its operators;
//! - [`model`]: the free, interaction, sector and drive Hamiltonians;
//! - [`dressed`]: diagonalisation, the dressed positive-frequency operators and
//!   the jump channels of the global master equation;
//! - [`dynamics`]: master-equation integration, a dense superoperator reference
//!   propagator, and quantum-regression two-time correlations;
//! - [`observables`]: dressed particle numbers, output fluxes, equal-time
//!   correlation functions and the emission spectrum.
//!
//! All energies, rates and times are expressed in units of the plasmon
//! frequency ω₀ (times in 1/ω₀).

pub mod dressed;
pub mod dynamics;
pub mod error;
pub mod expm;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod observables;

pub use dressed::{ChannelId, DressedBasis, JumpChannel};
pub use dynamics::{LindbladGenerator, Trajectory};
pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, Level, Mode, Operator, SpaceDims, StateVector};
pub use model::{DriveParams, ModelParams};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for every operator in the crate.
pub type CMat = faer::Mat<C64>;
