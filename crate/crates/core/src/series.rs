//! Feature extraction on sampled time series: refined extrema, revival
//! detection for negativity curves, windowed dip location for entropy
//! curves.

/// A refined extremum of a sampled series.
#[derive(Debug, Clone, Copy)]
pub struct Extremum {
    pub index: usize,
    pub time: f64,
    pub value: f64,
}

/// Vertex of the parabola through three neighbouring samples; falls back
/// to the grid point when the triple is degenerate.
fn refine(ts: &[f64], ys: &[f64], i: usize) -> Extremum {
    let (t0, t1, t2) = (ts[i - 1], ts[i], ts[i + 1]);
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let num = (t1 - t0).powi(2) * (y1 - y2) - (t1 - t2).powi(2) * (y1 - y0);
    let den = (t1 - t0) * (y1 - y2) - (t1 - t2) * (y1 - y0);
    if den.abs() < 1e-300 {
        return Extremum { index: i, time: t1, value: y1 };
    }
    let t_star = t1 - 0.5 * num / den;
    // Lagrange evaluation of the same parabola at t_star.
    let l0 = (t_star - t1) * (t_star - t2) / ((t0 - t1) * (t0 - t2));
    let l1 = (t_star - t0) * (t_star - t2) / ((t1 - t0) * (t1 - t2));
    let l2 = (t_star - t0) * (t_star - t1) / ((t2 - t0) * (t2 - t1));
    Extremum { index: i, time: t_star, value: y0 * l0 + y1 * l1 + y2 * l2 }
}

/// Indices of strict interior local maxima.
pub fn local_maxima(ys: &[f64]) -> Vec<usize> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])
        .collect()
}

/// Global minimum over samples with `lo <= t <= hi`, quadratically
/// refined. Requires the window to contain a rise before the minimum
/// (i.e. the series is not monotonically decreasing into it from the
/// window edge), so a bare decaying tail does not count as a dip.
pub fn windowed_dip(ts: &[f64], ys: &[f64], lo: f64, hi: f64) -> Option<Extremum> {
    let idx: Vec<usize> = (0..ts.len()).filter(|&i| ts[i] >= lo && ts[i] <= hi).collect();
    if idx.len() < 3 {
        return None;
    }
    let (first, last) = (idx[0], *idx.last().unwrap());
    let min_i = idx[1..idx.len() - 1]
        .iter()
        .copied()
        .min_by(|&a, &b| ys[a].total_cmp(&ys[b]))?;
    // Demand an actual rebound after the minimum within the window.
    let rises_after = (min_i + 1..=last).any(|i| ys[i] > ys[min_i]);
    let falls_into = (first..min_i).any(|i| ys[i] > ys[min_i]);
    if !rises_after || !falls_into {
        return None;
    }
    Some(refine(ts, ys, min_i))
}

/// What counts as a revival of a decaying series.
#[derive(Debug, Clone, Copy)]
pub struct RevivalCriteria {
    /// Ignore structure before this time (the initial growth and
    /// arrival peak live there).
    pub skip_until: f64,
    /// A rebound must reach this multiple of the running minimum that
    /// precedes it.
    pub min_ratio: f64,
    /// ... and must rise above that minimum by this fraction of the
    /// series' global maximum.
    pub min_rise_fraction: f64,
}

impl Default for RevivalCriteria {
    fn default() -> Self {
        Self { skip_until: 0.0, min_ratio: 1.2, min_rise_fraction: 0.02 }
    }
}

/// Most prominent rebound after the initial decay: a local maximum that
/// climbs back above the running minimum recorded since the series'
/// first peak. Returns None when the series just decays (no revival).
pub fn detect_revival(ts: &[f64], ys: &[f64], criteria: &RevivalCriteria) -> Option<Extremum> {
    let n = ts.len();
    if n < 5 {
        return None;
    }
    let global_max = ys.iter().copied().fold(f64::MIN, f64::max);
    if !(global_max > 0.0) {
        return None;
    }

    // Running minimum since the first peak; candidate rebounds are
    // measured against it.
    let first_peak = local_maxima(ys).into_iter().next().unwrap_or(0);
    let mut run_min = ys[first_peak];
    let mut best: Option<(f64, Extremum)> = None;
    for i in first_peak + 1..n - 1 {
        run_min = run_min.min(ys[i]);
        let is_max = ys[i] > ys[i - 1] && ys[i] >= ys[i + 1];
        if !is_max || ts[i] < criteria.skip_until {
            continue;
        }
        let rise = ys[i] - run_min;
        if ys[i] >= criteria.min_ratio * run_min.max(1e-300) && rise >= criteria.min_rise_fraction * global_max {
            let e = refine(ts, ys, i);
            if best.map(|(r, _)| rise > r).unwrap_or(true) {
                best = Some((rise, e));
            }
        }
    }
    best.map(|(_, e)| e)
}
