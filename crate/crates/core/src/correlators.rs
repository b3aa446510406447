//! Two-point correlators for the quenched chain and covariance matrices
//! over site subsets.
//!
//! The ground state of the pre-quench chain evolves under the
//! post-quench Hamiltonian; each Fourier mode stays Gaussian with
//!
//!   Q_k(t) = <q_k q_k>,  P_k(t) = <p_k p_k>,  R_k(t) = <{q_k, p_k}>/2,
//!
//! and real-space correlators are cosine transforms of these. Only the
//! reduced distance |i-j| enters, so one table of L/2+1 values per block
//! serves every site pair at a given time.

use nalgebra::DMatrix;

use crate::chain::{QuenchSpec, EPS_ZERO};
use crate::error::{Error, Result};
use crate::numeric::{cos_two_pi_frac, sinc, KahanSum};

/// Per-mode correlators at a fixed time, indexed by k - 1 for k = 1..=L.
#[derive(Debug, Clone)]
pub struct ModeCorrelators {
    pub time: f64,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub r: Vec<f64>,
}

impl ModeCorrelators {
    /// Heisenberg product Q_k P_k - R_k^2; exactly 1/4 for every mode of
    /// a pure-state evolution.
    pub fn uncertainty(&self, idx: usize) -> f64 {
        self.q[idx] * self.p[idx] - self.r[idx] * self.r[idx]
    }
}

/// Mode correlators of the quench at time t.
///
/// The closed forms are evaluated through half-angle identities,
///
///   Q_k = (cos^2(w2 t) + w1^2 t^2 sinc^2(w2 t)) / (2 w1)
///   P_k = (w1 cos^2(w2 t) + (w2^2 / w1) sin^2(w2 t)) / 2
///   R_k = (w1^2 - w2^2) t sinc(2 w2 t) / (2 w1),
///
/// which stay finite through the massless post-quench zero mode
/// (w2 -> 0 grows as t^2) and keep Q P - R^2 = 1/4 to rounding.
pub fn mode_correlators(quench: &QuenchSpec, t: f64) -> Result<ModeCorrelators> {
    let l = quench.sites();
    let mut q = Vec::with_capacity(l);
    let mut p = Vec::with_capacity(l);
    let mut r = Vec::with_capacity(l);
    for k in 1..=l {
        let w1 = quench.pre().dispersion(k);
        if w1 <= EPS_ZERO {
            return Err(Error::InvalidPreQuench { mode: k, omega: w1 });
        }
        let w2 = quench.post().dispersion(k);
        let c = (w2 * t).cos();
        let s = (w2 * t).sin();
        q.push((c * c + w1 * w1 * t * t * sinc(w2 * t).powi(2)) / (2.0 * w1));
        p.push((w1 * c * c + w2 * w2 * s * s / w1) / 2.0);
        r.push((w1 * w1 - w2 * w2) * t * sinc(2.0 * w2 * t) / (2.0 * w1));
    }
    Ok(ModeCorrelators { time: t, q, p, r })
}

/// An ordered set of distinct sites, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    sites: Vec<usize>,
}

impl Region {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidSpec("region must be non-empty".into()));
        }
        for w in sites.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidSpec(format!(
                    "region sites must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if sites[0] == 0 {
            return Err(Error::InvalidSpec("sites are 1-based".into()));
        }
        Ok(Self { sites })
    }

    /// Contiguous block of `len` sites starting at `start`.
    pub fn block(start: usize, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidSpec("region must be non-empty".into()));
        }
        Self::new((start..start + len).collect())
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.sites.iter().all(|s| !other.contains(*s))
    }

    /// Sorted union of two disjoint regions.
    pub fn union(&self, other: &Region) -> Result<Self> {
        if !self.is_disjoint(other) {
            return Err(Error::InvalidSpec("regions overlap".into()));
        }
        let mut sites: Vec<usize> = self.sites.iter().chain(other.sites.iter()).copied().collect();
        sites.sort_unstable();
        Self::new(sites)
    }

    pub fn max_site(&self) -> usize {
        *self.sites.last().unwrap()
    }
}

/// Covariance data over a region: the phi-phi, pi-pi and mixed blocks.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    region: Region,
    q: DMatrix<f64>,
    p: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Build from explicit blocks, validating shapes against the region.
    pub fn from_blocks(region: Region, q: DMatrix<f64>, p: DMatrix<f64>, r: DMatrix<f64>) -> Result<Self> {
        let n = region.len();
        for (name, m) in [("Q", &q), ("P", &p), ("R", &r)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{name} block is {}x{}, region has {n} sites",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { region, q, p, r })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn q_block(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn p_block(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn r_block(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// The 2l x 2l covariance matrix [[Q, R], [R^T, P]]: phi block first,
    /// pi block second. Every downstream consumer assumes this ordering.
    pub fn assemble(&self) -> DMatrix<f64> {
        let n = self.region.len();
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        g.view_mut((0, 0), (n, n)).copy_from(&self.q);
        g.view_mut((0, n), (n, n)).copy_from(&self.r);
        g.view_mut((n, 0), (n, n)).copy_from(&self.r.transpose());
        g.view_mut((n, n), (n, n)).copy_from(&self.p);
        g
    }
}

/// Real-space covariance blocks over `region` at time t:
///
///   Q_ij = (1/L) sum_k Q_k cos(2 pi k (i-j) / L),
///
/// and identically for P and R. Translation invariance is exploited:
/// each distinct reduced distance is summed once, then gathered.
pub fn realspace_correlators(quench: &QuenchSpec, t: f64, region: &Region) -> Result<CovarianceMatrix> {
    let l = quench.sites();
    if region.max_site() > l {
        return Err(Error::InvalidSpec(format!(
            "region site {} outside chain of {} sites",
            region.max_site(),
            l
        )));
    }
    let modes = mode_correlators(quench, t)?;

    // Distances actually present in the region.
    let n = region.len();
    let sites = region.sites();
    let mut needed = vec![false; l / 2 + 1];
    for i in 0..n {
        for j in i..n {
            let d = sites[j] - sites[i];
            needed[d.min(l - d)] = true;
        }
    }

    let cos_table: Vec<f64> = (0..l).map(|m| cos_two_pi_frac(m as u64, l as u64)).collect();
    let inv_l = 1.0 / l as f64;
    let mut q_of = vec![0.0; l / 2 + 1];
    let mut p_of = vec![0.0; l / 2 + 1];
    let mut r_of = vec![0.0; l / 2 + 1];
    for (d, (qd, (pd, rd))) in q_of.iter_mut().zip(p_of.iter_mut().zip(r_of.iter_mut())).enumerate() {
        if !needed[d] {
            continue;
        }
        let (mut aq, mut ap, mut ar) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
        for k in 1..=l {
            let c = cos_table[(k * d) % l];
            aq.add(modes.q[k - 1] * c);
            ap.add(modes.p[k - 1] * c);
            ar.add(modes.r[k - 1] * c);
        }
        *qd = aq.total() * inv_l;
        *pd = ap.total() * inv_l;
        *rd = ar.total() * inv_l;
    }

    let gather = |table: &[f64]| {
        DMatrix::from_fn(n, n, |i, j| {
            let d = sites[i].abs_diff(sites[j]);
            table[d.min(l - d)]
        })
    };
    CovarianceMatrix::from_blocks(region.clone(), gather(&q_of), gather(&p_of), gather(&r_of))
}
