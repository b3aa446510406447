//! Semiclassical quasiparticle model of the quench.
//!
//! The quench emits entangled quasiparticle pairs; mode k carries an
//! entropy density s(k) set by its GGE occupation and spreads at the
//! post-quench group velocity. Counting pairs shared between a block
//! and its complement gives the entropy growth law, its finite-size
//! version with wraparound revivals, the revival time L / (2 v_max),
//! and the dip heights it predicts.

use rayon::prelude::*;

use crate::chain::{QuenchSpec, EPS_ZERO};
use crate::correlators::Region;
use crate::entanglement::subsystem_entropy;
use crate::error::{Error, Result};
use crate::series::windowed_dip;

/// GGE data per mode, indexed by k - 1.
#[derive(Debug, Clone)]
pub struct GgeData {
    /// Occupations n_k; infinite for a massless post-quench zero mode.
    pub occupation: Vec<f64>,
    /// Entropy densities s(k) = (n+1) ln(n+1) - n ln n; zero for
    /// excluded modes.
    pub entropy_density: Vec<f64>,
    /// Lagrange multipliers lambda_k = ln(1 + 1/n_k); infinite where
    /// n_k = 0.
    pub multiplier: Vec<f64>,
    /// 1-based modes dropped from sums (infinite occupation).
    pub excluded: Vec<usize>,
}

impl GgeData {
    /// Total GGE entropy, sum of s(k) over retained modes.
    pub fn total_entropy(&self) -> f64 {
        self.entropy_density.iter().sum()
    }
}

/// Mode occupations after the quench:
///
///   n_k = (w1 - w2)^2 / (4 w1 w2),
///
/// the cancellation-free form of (w2/w1 + w1/w2)/4 - 1/2, so n_k is
/// exactly zero when the mode is untouched. A massless post-quench zero
/// mode has infinite occupation and is excluded from sums.
pub fn occupations(quench: &QuenchSpec) -> Result<GgeData> {
    let l = quench.sites();
    let mut data = GgeData {
        occupation: Vec::with_capacity(l),
        entropy_density: Vec::with_capacity(l),
        multiplier: Vec::with_capacity(l),
        excluded: Vec::new(),
    };
    for k in 1..=l {
        let w1 = quench.pre().dispersion(k);
        if w1 <= EPS_ZERO {
            return Err(Error::InvalidPreQuench { mode: k, omega: w1 });
        }
        let w2 = quench.post().dispersion(k);
        if w2 <= EPS_ZERO {
            data.occupation.push(f64::INFINITY);
            data.entropy_density.push(0.0);
            data.multiplier.push(0.0);
            data.excluded.push(k);
            continue;
        }
        let n = (w1 - w2) * (w1 - w2) / (4.0 * w1 * w2);
        data.occupation.push(n);
        data.entropy_density.push(entropy_of_occupation(n));
        data.multiplier.push(if n > 0.0 { (1.0 / n).ln_1p() } else { f64::INFINITY });
    }
    Ok(data)
}

/// s(n) = (n+1) ln(n+1) - n ln n, stable down to n -> 0.
fn entropy_of_occupation(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        (n + 1.0) * n.ln_1p() - n * n.ln()
    }
}

/// Per-mode speeds and entropy densities, precomputed once so scans over
/// t and ell stay cheap.
#[derive(Debug, Clone)]
pub struct QuasiparticleModel {
    sites: usize,
    /// (|v(k)|, s(k)) for every retained mode.
    modes: Vec<(f64, f64)>,
}

impl QuasiparticleModel {
    /// Modes with unbounded lattice velocity (the k = L mode for
    /// alpha < 1) or infinite occupation are dropped; each is a 1/L
    /// measure-zero contribution.
    pub fn new(quench: &QuenchSpec) -> Result<Self> {
        let gge = occupations(quench)?;
        let l = quench.sites();
        let mut modes = Vec::with_capacity(l);
        for k in 1..=l {
            let s = gge.entropy_density[k - 1];
            if s == 0.0 {
                continue;
            }
            match quench.post().group_velocity(k) {
                Ok(v) if v.is_finite() => modes.push((v.abs(), s)),
                _ => {}
            }
        }
        Ok(Self { sites: l, modes })
    }

    #[cfg(test)]
    pub(crate) fn from_modes(sites: usize, modes: Vec<(f64, f64)>) -> Self {
        Self { sites, modes }
    }

    /// Continuum growth law: modes still inside the block contribute
    /// ballistically, modes that have crossed it saturate.
    ///
    ///   S(t) = 2t sum_{2|v|t < ell} |v| s / L + ell sum_{2|v|t >= ell} s / L.
    pub fn continuum(&self, t: f64, ell: usize) -> f64 {
        let l = self.sites as f64;
        let ell_f = ell as f64;
        let mut total = 0.0;
        for &(v, s) in &self.modes {
            total += if 2.0 * v * t < ell_f { 2.0 * t * v * s } else { ell_f * s };
        }
        total / l
    }

    /// Finite-size law with wraparound: x_k = frac(2 |v| t / L) and
    ///
    ///   S(t) = (1/L) sum_k s(k) min(L x_k, ell, L (1 - x_k)),
    ///
    /// a triangular wave per mode, clipped at the block size.
    pub fn finite(&self, t: f64, ell: usize) -> f64 {
        let l = self.sites as f64;
        let ell_f = ell as f64;
        let mut total = 0.0;
        for &(v, s) in &self.modes {
            let x = (2.0 * v * t / l).fract();
            total += s * (l * x).min(ell_f).min(l * (1.0 - x));
        }
        total / l
    }

    /// Long-time plateau ell * (1/L) sum_k s(k).
    pub fn saturation(&self, ell: usize) -> f64 {
        ell as f64 / self.sites as f64 * self.modes.iter().map(|&(_, s)| s).sum::<f64>()
    }
}

pub fn entropy_prediction_continuum(quench: &QuenchSpec, t: f64, ell: usize) -> Result<f64> {
    Ok(QuasiparticleModel::new(quench)?.continuum(t, ell))
}

pub fn entropy_prediction_finite(quench: &QuenchSpec, t: f64, ell: usize) -> Result<f64> {
    Ok(QuasiparticleModel::new(quench)?.finite(t, ell))
}

/// Whether the continuum group velocity of the chain is bounded.
///
/// Massless dispersion has v ~ q^(alpha/2 - 1) near zero momentum,
/// massive v ~ q^(alpha - 1); at the marginal massive point alpha = 1
/// the maximum still sits at the lattice edge, so no revival geometry
/// exists there either.
pub fn velocity_bounded(quench: &QuenchSpec) -> bool {
    let post = quench.post();
    if post.mass() == 0.0 {
        post.alpha() >= 2.0
    } else {
        post.alpha() > 1.0
    }
}

/// Predicted first-wraparound time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RevivalTime {
    Finite(f64),
    /// Unbounded quasiparticle velocity: no revival predicted.
    Unbounded,
}

impl RevivalTime {
    pub fn finite(&self) -> Option<f64> {
        match self {
            RevivalTime::Finite(t) => Some(*t),
            RevivalTime::Unbounded => None,
        }
    }
}

/// t_R = L / (2 v_max) when the velocity is bounded.
pub fn revival_time(quench: &QuenchSpec) -> RevivalTime {
    if !velocity_bounded(quench) {
        return RevivalTime::Unbounded;
    }
    let mv = quench.post().max_velocity();
    RevivalTime::Finite(quench.sites() as f64 / (2.0 * mv.value))
}

/// Scan controls for locating the entropy dip.
#[derive(Debug, Clone, Copy)]
pub struct DipScan {
    /// Window in units of the predicted revival time.
    pub window: (f64, f64),
    /// Number of grid points across the window (the scan also covers
    /// [0, lo) coarsely to seed nothing; only the window is searched).
    pub steps: usize,
}

impl Default for DipScan {
    fn default() -> Self {
        Self { window: (0.55, 1.35), steps: 320 }
    }
}

/// Dip measurement at one system size.
#[derive(Debug, Clone, Copy)]
pub struct DipPoint {
    pub sites: usize,
    pub ell: usize,
    /// Where the exact series dips, and its value there.
    pub dip_time: f64,
    pub dip_value: f64,
    /// GGE saturation entropy of the block.
    pub saturation: f64,
    /// (S_inf - S(t_dip)) / ell from the exact series.
    pub delta_exact: f64,
    /// Same quantity read off the finite-size prediction at its own
    /// minimum in the window.
    pub delta_predicted: f64,
    pub predicted_dip_time: f64,
    /// Worst spectrum residual seen across the scan.
    pub worst_residual: f64,
    /// Total clamped eigenvalues across the scan.
    pub clamped: usize,
}

/// Measure entropy dips for a family of (L, ell) geometries sharing the
/// same quench parameters. Geometries are independent and run in
/// parallel.
pub fn dip_height(
    alpha: f64,
    mass_pre: f64,
    mass_post: f64,
    geometries: &[(usize, usize)],
    scan: &DipScan,
) -> Result<Vec<DipPoint>> {
    geometries
        .par_iter()
        .map(|&(sites, ell)| dip_point(alpha, mass_pre, mass_post, sites, ell, scan))
        .collect()
}

fn dip_point(
    alpha: f64,
    mass_pre: f64,
    mass_post: f64,
    sites: usize,
    ell: usize,
    scan: &DipScan,
) -> Result<DipPoint> {
    if sites < 2 * ell {
        return Err(Error::InvalidSpec(format!("L = {sites} must be at least 2 ell = {}", 2 * ell)));
    }
    let quench = QuenchSpec::mass_quench(sites, alpha, mass_pre, mass_post)?;
    let t_r = match revival_time(&quench) {
        RevivalTime::Finite(t) => t,
        RevivalTime::Unbounded => {
            return Err(Error::NoDipFound { lo: 0.0, hi: f64::INFINITY });
        }
    };
    let (lo, hi) = (scan.window.0 * t_r, scan.window.1 * t_r);
    let dt = (hi - lo) / scan.steps as f64;
    let ts: Vec<f64> = (0..=scan.steps).map(|i| lo + i as f64 * dt).collect();

    let region = Region::block(1, ell)?;
    let samples: Vec<(f64, f64, usize)> = ts
        .par_iter()
        .map(|&t| {
            subsystem_entropy(&quench, t, &region)
                .map(|s| (s.value, s.spectrum.residual, s.spectrum.clamp_count()))
        })
        .collect::<Result<_>>()?;
    let exact: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let worst_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let clamped = samples.iter().map(|s| s.2).sum();
    let dip = windowed_dip(&ts, &exact, lo, hi).ok_or(Error::NoDipFound { lo, hi })?;

    let model = QuasiparticleModel::new(&quench)?;
    let predicted: Vec<f64> = ts.iter().map(|&t| model.finite(t, ell)).collect();
    let pdip = windowed_dip(&ts, &predicted, lo, hi).ok_or(Error::NoDipFound { lo, hi })?;

    let saturation = model.saturation(ell);
    Ok(DipPoint {
        sites,
        ell,
        dip_time: dip.time,
        dip_value: dip.value,
        saturation,
        delta_exact: (saturation - dip.value) / ell as f64,
        delta_predicted: (saturation - pdip.value) / ell as f64,
        predicted_dip_time: pdip.time,
        worst_residual,
        clamped,
    })
}
