//! Decay-law fits on measure-vs-distance series: least squares of
//! ln y against x (exponential model) or ln x (power model), over an
//! explicit window. Fits never extrapolate outside their window.

use crate::error::Error;
use crate::numeric::linear_fit;

/// Values at or below this are treated as numerically zero and dropped.
pub const MEASURE_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// y = C x^slope: linear in (ln x, ln y).
    Power,
    /// y = C e^(slope x): linear in (x, ln y).
    Exponential,
}

impl FitModel {
    pub fn name(&self) -> &'static str {
        match self {
            FitModel::Power => "power",
            FitModel::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub model: FitModel,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points_used: usize,
    pub dropped_nonpositive: usize,
}

/// Fit one model on the points with `window.0 <= x <= window.1`.
///
/// Non-positive measure values are dropped (counted in the report); at
/// least four positive points must remain. The power model also skips
/// x <= 0 where ln x is undefined.
pub fn fit_decay(x: &[f64], y: &[f64], model: FitModel, window: (f64, f64)) -> Result<FitReport, Error> {
    assert_eq!(x.len(), y.len());
    let mut dropped = 0usize;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&xi, &yi) in x.iter().zip(y) {
        if xi < window.0 || xi > window.1 {
            continue;
        }
        if yi <= MEASURE_FLOOR {
            dropped += 1;
            continue;
        }
        if model == FitModel::Power && xi <= 0.0 {
            continue;
        }
        xs.push(match model {
            FitModel::Power => xi.ln(),
            FitModel::Exponential => xi,
        });
        ys.push(yi.ln());
    }
    if xs.len() < 4 {
        if dropped > 0 && xs.is_empty() {
            return Err(Error::NonPositiveValues { dropped });
        }
        return Err(Error::InsufficientData { need: 4, have: xs.len() });
    }
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(FitReport {
        model,
        slope,
        intercept,
        r_squared,
        window,
        points_used: xs.len(),
        dropped_nonpositive: dropped,
    })
}

/// The default windows used when none are given: the small-separation
/// power window and the large-separation exponential window.
pub const DEFAULT_POWER_WINDOW: (f64, f64) = (0.0, 2.5);
pub const DEFAULT_EXPONENTIAL_WINDOW: (f64, f64) = (60.0, f64::INFINITY);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_synthetic_power_law() {
        let x: Vec<f64> = (1..40).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.0 * v.powf(-2.0)).collect();
        let report = fit_decay(&x, &y, FitModel::Power, (0.0, 100.0)).unwrap();
        assert!((report.slope + 2.0).abs() < 1e-6, "slope {}", report.slope);
        assert!((report.intercept - 3.0f64.ln()).abs() < 1e-6);
        assert!(report.r_squared > 0.999999);
    }

    #[test]
    fn recovers_synthetic_exponential() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 5.0 * (-0.7 * v).exp()).collect();
        let report = fit_decay(&x, &y, FitModel::Exponential, (0.0, 30.0)).unwrap();
        assert!((report.slope + 0.7).abs() < 1e-6);
        assert!(report.r_squared > 0.999999);
        // Window is honored.
        assert_eq!(report.points_used, 31);
    }

    #[test]
    fn drops_dead_values_and_reports() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let mut y: Vec<f64> = x.iter().map(|&v| (-v).exp()).collect();
        y[7] = 0.0;
        y[8] = 1e-17;
        let report = fit_decay(&x, &y, FitModel::Exponential, (0.0, 9.0)).unwrap();
        assert_eq!(report.dropped_nonpositive, 2);
        assert_eq!(report.points_used, 8);
    }

    #[test]
    fn error_paths() {
        let x = [1.0, 2.0, 3.0];
        let y = [1.0, 0.5, 0.25];
        assert!(matches!(
            fit_decay(&x, &y, FitModel::Exponential, (0.0, 10.0)),
            Err(Error::InsufficientData { .. })
        ));
        let dead = [0.0, 0.0, 0.0, 0.0];
        let x4 = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            fit_decay(&x4, &dead, FitModel::Power, (0.0, 10.0)),
            Err(Error::NonPositiveValues { dropped: 4 })
        ));
    }
}
