//! Confidence bands and Kolmogorov–Smirnov-type tests for `N`.
//!
//! Both estimators converge, after scaling by `sqrt(nΔ)`, to a time-changed
//! Brownian motion; its supremum is distributed as `d · max_{[0,1]} |B|`.
//! Bands therefore have constant half-width `d q / sqrt(nΔ)` with `q` a
//! quantile of `max |B|`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::EstimateCurve;
use crate::error::{LevyError, Result};
use crate::special::normal_cdf;

/// `P(max_{s∈[0,1]} |B_s| ≤ a)`.
///
/// Small arguments use the theta series
/// `(4/π) Σ_k (-1)^k/(2k+1) exp(-(2k+1)²π²/(8a²))`; large ones the
/// reflection series `Σ_k (-1)^k [Φ((2k+1)a) - Φ((2k-1)a)]`, which converges
/// much faster there.
pub fn max_abs_brownian_cdf(a: f64) -> f64 {
    if !(a > 0.0) {
        return 0.0;
    }
    let p = if a < 1.0 {
        theta_series(a)
    } else {
        reflection_series(a)
    };
    p.clamp(0.0, 1.0)
}

pub(crate) fn theta_series(a: f64) -> f64 {
    let c = PI * PI / (8.0 * a * a);
    let mut sum = 0.0;
    for k in 0.. {
        let m = (2 * k + 1) as f64;
        let term = (-c * m * m).exp() / m;
        sum += if k % 2 == 0 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    4.0 / PI * sum
}

pub(crate) fn reflection_series(a: f64) -> f64 {
    // k and -k terms pair up: P = Σ_{k∈Z} (-1)^k [Φ((2k+1)a) - Φ((2k-1)a)]
    let mut sum = normal_cdf(a) - normal_cdf(-a);
    for k in 1.. {
        let kf = k as f64;
        let upper = normal_cdf((2.0 * kf + 1.0) * a) - normal_cdf((2.0 * kf - 1.0) * a);
        let lower = normal_cdf((-2.0 * kf + 1.0) * a) - normal_cdf((-2.0 * kf - 1.0) * a);
        let term = upper + lower;
        sum += if k % 2 == 0 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    sum
}

/// Inverse of [`max_abs_brownian_cdf`] by bisection on `[1e-6, 50]`.
pub fn max_abs_brownian_quantile(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(LevyError::config(format!(
            "quantile level must lie in (0,1), got {level}"
        )));
    }
    let (mut lo, mut hi) = (1e-6, 50.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if max_abs_brownian_cdf(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A constant-width envelope around an estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandResult {
    pub curve: EstimateCurve,
    pub half_width: f64,
    /// Target coverage `1 - α`.
    pub level: f64,
    pub q_value: f64,
    pub d_value: f64,
}

impl BandResult {
    pub fn lower(&self) -> Vec<f64> {
        self.curve
            .values
            .iter()
            .map(|v| v - self.half_width)
            .collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.curve
            .values
            .iter()
            .map(|v| v + self.half_width)
            .collect()
    }

    /// Whether `values` (aligned with the band's grid) stay inside everywhere.
    pub fn contains(&self, values: &[f64]) -> bool {
        self.curve
            .values
            .iter()
            .zip(values)
            .all(|(c, v)| (c - v).abs() <= self.half_width)
    }

    /// Zero-width band for a degenerate scale `d = 0`; only exact agreement
    /// with the estimate counts as covered.
    pub fn degenerate(curve: EstimateCurve, alpha: f64) -> Result<Self> {
        let q_value = max_abs_brownian_quantile(1.0 - alpha)?;
        Ok(BandResult {
            curve,
            half_width: 0.0,
            level: 1.0 - alpha,
            q_value,
            d_value: 0.0,
        })
    }
}

/// Band `curve ± d q_α / sqrt(nΔ)` with `P(max|B| ≤ q_α) = 1 - α`.
pub fn confidence_band(curve: EstimateCurve, d: f64, alpha: f64) -> Result<BandResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LevyError::config(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(LevyError::DegenerateBand(format!(
            "band scale must be positive, got {d}"
        )));
    }
    if !(curve.horizon() > 0.0) {
        return Err(LevyError::config("curve carries no sample size"));
    }
    let q_value = max_abs_brownian_quantile(1.0 - alpha)?;
    let half_width = d * q_value / curve.horizon().sqrt();
    Ok(BandResult {
        curve,
        half_width,
        level: 1.0 - alpha,
        q_value,
        d_value: d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub reject: bool,
    /// `max_t (|estimate(t) - hypothesised(t)| - half_width)`.
    pub sup_violation: f64,
    pub half_width: f64,
}

/// Rejects the hypothesised curve iff it leaves the band somewhere on the
/// grid.
pub fn ks_test<F: Fn(f64) -> f64>(band: &BandResult, hypothesized: F) -> TestOutcome {
    let sup_violation = band
        .curve
        .grid
        .iter()
        .zip(&band.curve.values)
        .map(|(&t, &v)| (v - hypothesized(t)).abs() - band.half_width)
        .fold(f64::NEG_INFINITY, f64::max);
    TestOutcome {
        reject: sup_violation > 0.0,
        sup_violation,
        half_width: band.half_width,
    }
}

/// Aggregated Monte-Carlo coverage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub model: String,
    pub method: crate::curve::Method,
    pub reps: usize,
    pub n: usize,
    pub delta: f64,
    pub level: f64,
    pub hits: usize,
    pub misses: usize,
    pub failures: usize,
    /// `hits / (hits + misses)`; failed replications are excluded.
    pub coverage: f64,
    pub mc_stderr: f64,
    pub failure_rate: f64,
}

impl CoverageReport {
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        model: String,
        method: crate::curve::Method,
        n: usize,
        delta: f64,
        level: f64,
        hits: usize,
        misses: usize,
        failures: usize,
    ) -> Self {
        let reps = hits + misses + failures;
        let valid = hits + misses;
        let coverage = if valid > 0 {
            hits as f64 / valid as f64
        } else {
            0.0
        };
        let mc_stderr = if valid > 0 {
            (coverage * (1.0 - coverage) / valid as f64).sqrt()
        } else {
            0.0
        };
        let failure_rate = if reps > 0 {
            failures as f64 / reps as f64
        } else {
            0.0
        };
        CoverageReport {
            model,
            method,
            reps,
            n,
            delta,
            level,
            hits,
            misses,
            failures,
            coverage,
            mc_stderr,
            failure_rate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Method, Target};

    fn curve(values: Vec<f64>, n: usize, delta: f64) -> EstimateCurve {
        EstimateCurve {
            grid: (0..values.len()).map(|k| k as f64).collect(),
            values,
            method: Method::Direct,
            target: Target::N,
            n,
            delta,
            clip: None,
        }
    }

    #[test]
    fn cdf_limits() {
        assert_eq!(max_abs_brownian_cdf(0.0), 0.0);
        assert_eq!(max_abs_brownian_cdf(-1.0), 0.0);
        assert!(max_abs_brownian_cdf(1e-3) < 1e-12);
        let top = max_abs_brownian_cdf(10.0);
        assert!(top <= 1.0 && 1.0 - top < 1e-10);
    }

    #[test]
    fn series_agree_where_both_converge() {
        for k in 0..60 {
            let a = 0.4 + 0.05 * k as f64;
            let d = (theta_series(a) - reflection_series(a)).abs();
            assert!(d < 1e-14, "a={a}: {d}");
        }
    }

    #[test]
    fn cdf_monotone_scan() {
        let mut prev = 0.0;
        for k in 1..=40 {
            let p = max_abs_brownian_cdf(0.1 * k as f64);
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn quantile_round_trip() {
        let q = max_abs_brownian_quantile(max_abs_brownian_cdf(1.0)).unwrap();
        assert!((q - 1.0).abs() < 1e-9);
        assert!(max_abs_brownian_quantile(0.5).unwrap() < max_abs_brownian_quantile(0.9).unwrap());
        assert!(max_abs_brownian_quantile(1.0).is_err());
        assert!(max_abs_brownian_quantile(0.0).is_err());
    }

    #[test]
    fn band_arithmetic() {
        let q = max_abs_brownian_quantile(0.9).unwrap();
        let b = confidence_band(curve(vec![0.0; 3], 1000, 0.1), 1.0, 0.1).unwrap();
        assert!((b.half_width - q / 10.0).abs() < 1e-15);
        assert_eq!(b.q_value, q);
        let wide = confidence_band(curve(vec![0.0; 3], 4000, 0.1), 1.0, 0.1).unwrap();
        assert_eq!(wide.half_width * 2.0, b.half_width);
        assert!(matches!(
            confidence_band(curve(vec![0.0; 3], 10, 0.1), 0.0, 0.1),
            Err(LevyError::DegenerateBand(_))
        ));
    }

    #[test]
    fn band_width_independent_of_grid() {
        let a = confidence_band(curve(vec![1.0; 5], 2000, 0.01), 3.0, 0.1).unwrap();
        let b = confidence_band(curve(vec![1.0; 512], 2000, 0.01), 3.0, 0.1).unwrap();
        assert_eq!(a.half_width, b.half_width);
    }

    #[test]
    fn ks_test_examples() {
        let c = curve(vec![0.5, 1.0, 2.0], 2000, 0.01);
        let band = confidence_band(c.clone(), 2.0, 0.1).unwrap();
        let same = |t: f64| c.values[t as usize];
        let out = ks_test(&band, same);
        assert!(!out.reject);
        assert_eq!(out.sup_violation, -band.half_width);
        let hw = band.half_width;
        let shifted = |t: f64| c.values[t as usize] + 2.0 * hw;
        assert!(ks_test(&band, shifted).reject);
    }

    #[test]
    fn coverage_report_counts() {
        let r = CoverageReport::from_counts("m".into(), Method::Direct, 10, 0.1, 0.9, 8, 1, 1);
        assert_eq!(r.reps, 10);
        assert!((r.coverage - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.mc_stderr - (r.coverage * (1.0 - r.coverage) / 9.0).sqrt()).abs() < 1e-15);
        assert!((r.failure_rate - 0.1).abs() < 1e-15);
    }
}
