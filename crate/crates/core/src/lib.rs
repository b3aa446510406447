//! Numerical toolkit for long-range harmonic chains with a
//! fractional-Laplacian kernel.
//!
//! The crate simulates periodic chains of coupled oscillators whose
//! coupling is a fractional power alpha of the lattice Laplacian, in
//! the ground state and after sudden mass quenches, and computes
//! Gaussian-state entanglement measures on them:
//!
//! - dispersion relation, group velocities and the real-space coupling
//!   matrix ([`chain`]);
//! - mode and real-space correlators, covariance matrices over site
//!   subsets ([`correlators`]);
//! - symplectic spectra, entanglement entropy, logarithmic negativity
//!   via the Gaussian partial transpose, mutual information
//!   ([`entanglement`]);
//! - the semiclassical quasiparticle model: GGE occupations, entropy
//!   growth laws, revival times and dip heights ([`quasiparticle`]);
//! - microcanonical out-of-time-ordered correlators ([`otoc`]);
//! - an independent dense-diagonalization oracle for cross-validation
//!   ([`oracle`]);
//! - a scenario runner emitting deterministic CSV/JSON series
//!   ([`scenario`]).

pub mod chain;
pub mod correlators;
pub mod entanglement;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod otoc;
pub mod quasiparticle;
pub mod scenario;
pub mod series;

pub use chain::{ChainSpec, MaxVelocity, QuenchSpec};
pub use correlators::{mode_correlators, realspace_correlators, CovarianceMatrix, ModeCorrelators, Region};
pub use entanglement::{
    entanglement_entropy, log_negativity, mutual_information, partial_transpose, subsystem_entropy,
    symplectic_spectrum, LogNegativity, MutualInformation, SubsystemEntropy, SymplecticSpectrum,
};
pub use error::{Error, Result};
pub use oracle::{oracle_static, OracleResult};
pub use otoc::{otoc_b, otoc_series, OtocForm, OtocSeries};
pub use quasiparticle::{
    dip_height, entropy_prediction_continuum, entropy_prediction_finite, occupations, revival_time,
    DipPoint, DipScan, GgeData, QuasiparticleModel, RevivalTime,
};
