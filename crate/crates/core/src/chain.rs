//! The long-range harmonic chain: a periodic lattice of L oscillators
//! coupled through a fractional power of the lattice Laplacian, plus a
//! mass term. Everything downstream (correlators, entanglement, the
//! quasiparticle model, OTOCs) is driven by the dispersion relation
//!
//!   omega_k = sqrt(m^alpha + (4 sin^2(pi k / L))^(alpha/2)),  k = 1..=L,
//!
//! with the zero mode sitting at k = L. The lattice spacing is fixed to
//! one; alpha = 2 recovers the nearest-neighbour Klein-Gordon chain.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::{trig_pi_frac, KahanSum};

/// Modes with frequency below this are treated as degenerate (critical
/// zero modes).
pub const EPS_ZERO: f64 = 1e-12;

/// Mass substituted for exactly-critical requests; keeps the zero mode
/// barely gapped so ground-state correlators stay finite.
pub const DEFAULT_MASS_FLOOR: f64 = 1e-5;

/// A periodic fractional-Laplacian chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    sites: usize,
    alpha: f64,
    mass: f64,
}

impl ChainSpec {
    pub fn new(sites: usize, alpha: f64, mass: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 sites, got {sites}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidSpec(format!("alpha must be positive, got {alpha}")));
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::InvalidSpec(format!("mass must be non-negative, got {mass}")));
        }
        Ok(Self { sites, alpha, mass })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// m^alpha, with the m = 0 corner pinned to 0 by continuity
    /// (0^0 in IEEE would give 1).
    pub fn mass_term(&self) -> f64 {
        if self.mass == 0.0 {
            0.0
        } else {
            self.mass.powf(self.alpha)
        }
    }

    /// omega_k^2 for k in 1..=L.
    pub fn dispersion_sq(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.sites, "mode index {k} outside 1..={}", self.sites);
        let (s, _) = trig_pi_frac(k as u64, self.sites as u64);
        let kernel = if s == 0.0 {
            0.0
        } else {
            (4.0 * s * s).powf(self.alpha / 2.0)
        };
        self.mass_term() + kernel
    }

    /// omega_k for k in 1..=L.
    pub fn dispersion(&self, k: usize) -> f64 {
        self.dispersion_sq(k).sqrt()
    }

    /// Group velocity d omega / dq at the physical momentum q = 2 pi k / L:
    ///
    ///   v(k) = 2^(alpha-2) * alpha * cot(pi k/L) * sin(pi k/L)^alpha / omega_k.
    ///
    /// Negative for k > L/2 (left movers). Err for critical zero modes.
    pub fn group_velocity(&self, k: usize) -> Result<f64> {
        let omega = self.dispersion(k);
        if omega < EPS_ZERO {
            return Err(Error::DegenerateMode { mode: k, omega, eps: EPS_ZERO });
        }
        let (s, c) = trig_pi_frac(k as u64, self.sites as u64);
        // cot * sin^alpha written as cos * sin^(alpha-1); at s = 0 IEEE
        // powf gives the correct one-sided limit (0 for alpha > 1,
        // 1 for alpha = 1, +inf for alpha < 1).
        let sin_pow = s.powf(self.alpha - 1.0);
        Ok(2.0f64.powf(self.alpha - 2.0) * self.alpha * c * sin_pow / omega)
    }

    /// Fastest mode over k = 1..L-1.
    ///
    /// `at_boundary` is set when the maximum sits at the smallest
    /// resolved momentum, the lattice signature of an unbounded
    /// continuum velocity (any alpha massless, or alpha <= 1 massive).
    pub fn max_velocity(&self) -> MaxVelocity {
        let mut best = f64::NEG_INFINITY;
        let mut best_k = 1;
        for k in 1..self.sites {
            // k = 1..L-1 never hits the zero mode, so this cannot fail.
            let v = self.group_velocity(k).expect("interior modes are non-degenerate").abs();
            if v > best {
                best = v;
                best_k = k;
            }
        }
        MaxVelocity {
            value: best,
            mode: best_k,
            at_boundary: best_k == 1 || best_k == self.sites - 1,
        }
    }

    /// Real-space coupling matrix: the circulant
    ///
    ///   V_ij = (1/L) sum_k omega_k^2 cos(2 pi k (i-j) / L),
    ///
    /// whose eigenvalues are exactly the omega_k^2. Built from the
    /// spectral definition so the lattice model and the dispersion
    /// relation agree by construction.
    pub fn coupling_matrix(&self) -> DMatrix<f64> {
        let l = self.sites;
        let row = self.coupling_row();
        DMatrix::from_fn(l, l, |i, j| {
            let d = i.abs_diff(j);
            row[d.min(l - d)]
        })
    }

    /// First row of the circulant V by distance d = 0..=L/2.
    pub(crate) fn coupling_row(&self) -> Vec<f64> {
        let l = self.sites;
        let omega_sq: Vec<f64> = (1..=l).map(|k| self.dispersion_sq(k)).collect();
        let cos_table: Vec<f64> = (0..l).map(|m| crate::numeric::cos_two_pi_frac(m as u64, l as u64)).collect();
        (0..=l / 2)
            .map(|d| {
                let mut acc = KahanSum::new();
                for (k, w2) in omega_sq.iter().enumerate() {
                    acc.add(w2 * cos_table[((k + 1) * d) % l]);
                }
                acc.total() / l as f64
            })
            .collect()
    }
}

/// Result of the dense velocity scan.
#[derive(Debug, Clone, Copy)]
pub struct MaxVelocity {
    pub value: f64,
    pub mode: usize,
    pub at_boundary: bool,
}

/// A sudden mass quench: the ground state of `pre` evolved under `post`.
/// Only the mass may differ between the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    pre: ChainSpec,
    post: ChainSpec,
}

impl QuenchSpec {
    pub fn new(pre: ChainSpec, post: ChainSpec) -> Result<Self> {
        if pre.sites != post.sites {
            return Err(Error::InvalidSpec(format!(
                "quench must preserve the lattice: {} vs {} sites",
                pre.sites, post.sites
            )));
        }
        if pre.alpha != post.alpha {
            return Err(Error::InvalidSpec(format!(
                "quench must preserve alpha: {} vs {}",
                pre.alpha, post.alpha
            )));
        }
        Ok(Self { pre, post })
    }

    pub fn mass_quench(sites: usize, alpha: f64, mass_pre: f64, mass_post: f64) -> Result<Self> {
        Self::new(ChainSpec::new(sites, alpha, mass_pre)?, ChainSpec::new(sites, alpha, mass_post)?)
    }

    /// No quench at all: pre and post coincide. Static ground-state
    /// correlators come out of the same code path at any t.
    pub fn static_chain(spec: ChainSpec) -> Self {
        Self { pre: spec, post: spec }
    }

    pub fn pre(&self) -> &ChainSpec {
        &self.pre
    }

    pub fn post(&self) -> &ChainSpec {
        &self.post
    }

    pub fn sites(&self) -> usize {
        self.pre.sites
    }

    pub fn alpha(&self) -> f64 {
        self.pre.alpha
    }

    pub fn is_static(&self) -> bool {
        self.pre.mass == self.post.mass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(l: usize, alpha: f64, m: f64) -> ChainSpec {
        ChainSpec::new(l, alpha, m).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::new(1, 2.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 0.0, 0.0).is_err());
        assert!(ChainSpec::new(4, -1.0, 0.0).is_err());
        assert!(ChainSpec::new(4, 2.0, -0.1).is_err());
        assert!(ChainSpec::new(2, 0.5, 0.0).is_ok());
    }

    #[test]
    fn dispersion_known_values() {
        // alpha=2, m=0, k=L/2: 4 sin^2(pi/2) = 4, omega = 2.
        for &l in &[4usize, 10, 64, 1250] {
            assert_eq!(spec(l, 2.0, 0.0).dispersion(l / 2), 2.0);
        }
        // alpha=2, m=1, k=L: zero mode reduces to the bare mass.
        assert_eq!(spec(8, 2.0, 1.0).dispersion(8), 1.0);
        // alpha=1, m=0, k=L/2: sqrt((4)^(1/2)) = sqrt(2).
        assert!((spec(8, 1.0, 0.0).dispersion(4) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dispersion_reflection_symmetry_exact() {
        let s = spec(101, 1.3, 0.7);
        for k in 1..101 {
            assert_eq!(s.dispersion(k), s.dispersion(101 - k));
        }
    }

    #[test]
    fn dispersion_monotone_in_mass() {
        for &alpha in &[0.5, 1.0, 1.7, 2.0] {
            for k in 1..=16 {
                let mut prev = -1.0;
                for &m in &[0.0, 1e-5, 0.1, 1.0, 4.0] {
                    let w = spec(16, alpha, m).dispersion(k);
                    assert!(w >= prev, "omega not monotone in m at alpha={alpha}, k={k}");
                    prev = w;
                }
            }
        }
    }

    #[test]
    fn zero_mass_corner_is_continuous() {
        // m^alpha -> 0 as m -> 0 for every alpha, including the 0^0 trap.
        assert_eq!(spec(4, 0.5, 0.0).mass_term(), 0.0);
        assert_eq!(spec(4, 2.0, 0.0).dispersion(4), 0.0);
    }

    #[test]
    fn group_velocity_klein_gordon_massless() {
        // alpha=2, m=0: v(k) = cos(pi k / L).
        let s = spec(40, 2.0, 0.0);
        for k in 1..40 {
            let expect = (PI * k as f64 / 40.0).cos();
            assert!(
                (s.group_velocity(k).unwrap() - expect).abs() < 1e-14,
                "v mismatch at k={k}"
            );
        }
        // Zero mode is degenerate at m=0.
        assert!(matches!(s.group_velocity(40), Err(Error::DegenerateMode { .. })));
    }

    #[test]
    fn group_velocity_matches_finite_difference() {
        // Central difference of omega(q) at q = 2 pi k / L, the
        // continuum momentum the closed form differentiates in.
        let cases = [(1250usize, 0.5, 2.0), (1250, 1.6, 2.0), (200, 2.0, 1.0), (64, 1.1, 4.0)];
        for &(l, alpha, m) in &cases {
            let s = spec(l, alpha, m);
            let mass_term = s.mass_term();
            let omega = |q: f64| (mass_term + (4.0 * (q / 2.0).sin().powi(2)).powf(alpha / 2.0)).sqrt();
            for k in (1..l).step_by(l / 16) {
                let q = 2.0 * PI * k as f64 / l as f64;
                let h = 1e-6;
                let fd = (omega(q + h) - omega(q - h)) / (2.0 * h);
                let v = s.group_velocity(k).unwrap();
                assert!(
                    (v - fd).abs() <= 1e-6 * fd.abs().max(1e-3),
                    "l={l} alpha={alpha} m={m} k={k}: v={v} fd={fd}"
                );
            }
        }
    }

    #[test]
    fn max_velocity_regimes() {
        // Massless Klein-Gordon: v -> 1 as k -> 0, boundary-dominated.
        let mv = spec(400, 2.0, 0.0).max_velocity();
        assert!(mv.at_boundary);
        assert!((mv.value - (PI / 400.0).cos()).abs() < 1e-12);

        // alpha=1.6, m=2: interior maximum (generalized light cone).
        let s = spec(1250, 1.6, 2.0);
        let mv = s.max_velocity();
        assert!(!mv.at_boundary, "expected interior max, got mode {}", mv.mode);
        // Cross-check against a fine continuum scan.
        let mass_term = s.mass_term();
        let omega = |q: f64| (mass_term + (4.0 * (q / 2.0).sin().powi(2)).powf(0.8)).sqrt();
        let mut cont_max = 0.0f64;
        let n = 200_000;
        for i in 1..n {
            let q = PI * i as f64 / n as f64;
            let h = 1e-5;
            let v = ((omega(q + h) - omega(q - h)) / (2.0 * h)).abs();
            cont_max = cont_max.max(v);
        }
        assert!(
            (mv.value - cont_max).abs() < 1e-4,
            "lattice max {} vs continuum max {cont_max}",
            mv.value
        );

        // alpha=0.6, m=2: no bound, max runs off to the smallest momentum.
        assert!(spec(1250, 0.6, 2.0).max_velocity().at_boundary);
    }

    #[test]
    fn coupling_matrix_row_sums_give_mass_term() {
        for &(l, alpha, m) in &[(6usize, 0.5, 0.3), (16, 1.5, 1.0), (9, 2.0, 4.0)] {
            let s = spec(l, alpha, m);
            let v = s.coupling_matrix();
            for i in 0..l {
                let sum: f64 = v.row(i).iter().sum();
                assert!(
                    (sum - s.mass_term()).abs() < 1e-10 * s.mass_term().max(1.0),
                    "row {i} sum {sum} != {}",
                    s.mass_term()
                );
            }
        }
    }

    #[test]
    fn coupling_matrix_alpha_two_is_discrete_laplacian() {
        let l = 12;
        let v = spec(l, 2.0, 0.0).coupling_matrix();
        for i in 0..l {
            for j in 0..l {
                let d = (i as i64 - j as i64).rem_euclid(l as i64) as usize;
                let expect = match d.min(l - d) {
                    0 => 2.0,
                    1 => -1.0,
                    _ => 0.0,
                };
                assert!((v[(i, j)] - expect).abs() < 1e-10, "V[{i},{j}] = {}", v[(i, j)]);
            }
        }
    }

    #[test]
    fn coupling_matrix_two_sites() {
        let v = spec(2, 2.0, 1.0).coupling_matrix();
        assert!((v[(0, 0)] - 3.0).abs() < 1e-12);
        assert!((v[(0, 1)] + 2.0).abs() < 1e-12);
        assert!((v[(1, 0)] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_matrix_spectrum_matches_dispersion() {
        for &(l, alpha, m) in &[(16usize, 0.5, 1e-5), (24, 1.5, 1.0), (10, 2.0, 4.0)] {
            let s = spec(l, alpha, m);
            let v = s.coupling_matrix();
            let mut eig: Vec<f64> = v.symmetric_eigenvalues().iter().copied().collect();
            let mut expect: Vec<f64> = (1..=l).map(|k| s.dispersion_sq(k)).collect();
            eig.sort_by(f64::total_cmp);
            expect.sort_by(f64::total_cmp);
            for (a, b) in eig.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-8, "eigenvalue {a} vs omega^2 {b}");
            }
        }
    }

    #[test]
    fn coupling_matrix_positive_semidefinite() {
        for &m in &[0.0, 0.5] {
            let v = spec(14, 1.2, m).coupling_matrix();
            let min = v.symmetric_eigenvalues().iter().copied().fold(f64::MAX, f64::min);
            assert!(min > -1e-12, "min eigenvalue {min}");
            if m > 0.0 {
                assert!(min > 0.0);
            }
        }
    }

    #[test]
    fn quench_spec_constraints() {
        let a = spec(8, 1.5, 1.0);
        let b = spec(8, 1.5, 0.5);
        assert!(QuenchSpec::new(a, b).is_ok());
        assert!(QuenchSpec::new(a, spec(10, 1.5, 0.5)).is_err());
        assert!(QuenchSpec::new(a, spec(8, 2.0, 0.5)).is_err());
        assert!(QuenchSpec::static_chain(a).is_static());
    }
}
