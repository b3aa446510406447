//! Small numerical utilities shared across the crate: compensated
//! summation, exact-symmetry trigonometry on rational angles, and a
//! stable sinc.

use std::f64::consts::PI;

/// Kahan–Neumaier compensated accumulator.
///
/// Mode sums run over up to a few thousand terms whose partial
/// cancellations carry the signal (negativity differences near zero),
/// so plain summation is not good enough.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// sin(x)/x, continuous through x = 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// (sin, cos) of pi * num / den for integers, with the argument folded
/// into [0, pi/2] before evaluation.
///
/// Folding on the integers makes the lattice symmetries exact in
/// floating point: sin at (num, den) and (den - num, den) are the same
/// bit pattern, and the value at num = 0 mod den is exactly zero. Both
/// properties are relied on by the dispersion relation and the
/// circulant mode sums.
pub fn trig_pi_frac(num: u64, den: u64) -> (f64, f64) {
    debug_assert!(den > 0);
    let r = num % (2 * den);
    // Quadrant fold: compare 2r against den multiples to stay in integers.
    let (s_sign, c_sign, m) = if 2 * r <= den {
        (1.0, 1.0, r)
    } else if r <= den {
        (1.0, -1.0, den - r)
    } else if 2 * r <= 3 * den {
        (-1.0, -1.0, r - den)
    } else {
        (-1.0, 1.0, 2 * den - r)
    };
    let theta = PI * m as f64 / den as f64;
    (s_sign * theta.sin(), c_sign * theta.cos())
}

/// cos(2 pi m / den) via the integer-folded evaluation.
pub fn cos_two_pi_frac(m: u64, den: u64) -> f64 {
    trig_pi_frac(2 * (m % den), den).1
}

/// Ordinary least squares y = slope * x + intercept.
///
/// Returns (slope, intercept, r_squared). Requires at least two points;
/// callers check that.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_cancellation() {
        // 1 + 1e-16 added 1e4 times loses the tail in naive f64.
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        k.add(-1.0);
        assert!((k.total() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn sinc_limits() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-6) - (1.0 - 1e-12 / 6.0)).abs() < 1e-16);
        assert!((sinc(2.0) - 2.0f64.sin() / 2.0).abs() < 1e-16);
    }

    #[test]
    fn trig_fold_is_exactly_symmetric() {
        let den = 1250u64;
        for k in 1..den {
            let (s1, _) = trig_pi_frac(k, den);
            let (s2, _) = trig_pi_frac(den - k, den);
            assert_eq!(s1, s2, "sin fold mismatch at k={k}");
            let (_, c1) = trig_pi_frac(k, den);
            let (_, c2) = trig_pi_frac(den + k, den);
            assert_eq!(c1, -c2, "cos antiperiod mismatch at k={k}");
        }
        assert_eq!(trig_pi_frac(0, 7).0, 0.0);
        assert_eq!(trig_pi_frac(7, 7).0, 0.0);
        assert_eq!(trig_pi_frac(7, 7).1, -1.0);
    }

    #[test]
    fn cos_two_pi_matches_direct() {
        for &(m, den) in &[(0u64, 12u64), (3, 12), (5, 12), (11, 12), (7, 9)] {
            let direct = (2.0 * PI * m as f64 / den as f64).cos();
            assert!((cos_two_pi_frac(m, den) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_fit_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 0.5).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert!((a - 3.0).abs() < 1e-12);
        assert!((b + 0.5).abs() < 1e-12);
        assert!(r2 > 1.0 - 1e-12);
    }
}
