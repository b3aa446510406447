use thiserror::Error;

/// Errors raised by the physics layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain spec: {0}")]
    InvalidSpec(String),

    #[error("mode k={mode} is degenerate (omega={omega:.3e} below {eps:.0e})")]
    DegenerateMode { mode: usize, omega: f64, eps: f64 },

    #[error("pre-quench state is not normalizable: omega_1(k={mode}) = {omega:.3e}")]
    InvalidPreQuench { mode: usize, omega: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("site {site} not contained in the covariance region")]
    SiteNotInRegion { site: usize },

    #[error("eigenvalues of J*Gamma fail to pair into +/- i lambda (worst defect {defect:.3e})")]
    UnpairedSpectrum { defect: f64 },

    #[error("symplectic eigenvalue {value} below physical floor 1/2 by more than {tol:.0e}")]
    InvalidSpectrum { value: f64, tol: f64 },

    #[error("system size {sites} exceeds the dense-oracle limit {limit}")]
    TooLarge { sites: usize, limit: usize },

    #[error("coupling matrix is numerically singular (min eigenvalue {min_eig:.3e})")]
    NearSingular { min_eig: f64 },

    #[error("no entanglement dip found in the scan window [{lo:.3}, {hi:.3}]")]
    NoDipFound { lo: f64, hi: f64 },

    #[error("not enough data points: need {need}, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("no positive measure values left to fit ({dropped} dropped)")]
    NonPositiveValues { dropped: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
