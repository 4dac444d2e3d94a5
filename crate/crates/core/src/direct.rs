//! Linear counting estimators built from the empirical measure of the
//! increments.
//!
//! All of them are exact step functions: the increments are sorted once,
//! tied values are merged, and the estimate at `t` is a prefix sum looked up
//! by binary search.

use crate::curve::{validate_grid, EstimateCurve, Method, Target};
use crate::error::{LevyError, Result};
use crate::models::ClipFunction;
use crate::simulate::IncrementSample;

/// Distinct sorted values with their multiplicities.
fn sorted_atoms(xs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
    let mut counts: Vec<f64> = Vec::with_capacity(sorted.len());
    for x in sorted {
        match values.last() {
            Some(&last) if last == x => *counts.last_mut().unwrap() += 1.0,
            _ => {
                values.push(x);
                counts.push(1.0);
            }
        }
    }
    (values, counts)
}

/// Weighted empirical distribution function
/// `t ↦ (nΔ)⁻¹ Σ ρ(X_k) X_k² 1{X_k ≤ t}`.
pub fn direct_n(
    sample: &IncrementSample,
    clip: ClipFunction,
    grid: &[f64],
) -> Result<EstimateCurve> {
    validate_grid(grid)?;
    let (atoms, counts) = sorted_atoms(&sample.increments);
    let mut prefix = Vec::with_capacity(atoms.len() + 1);
    let mut acc = 0.0;
    prefix.push(acc);
    for (&x, &m) in atoms.iter().zip(&counts) {
        acc += m * clip.weight(x);
        prefix.push(acc);
    }
    let scale = sample.horizon();
    let values = grid
        .iter()
        .map(|&t| prefix[atoms.partition_point(|&x| x <= t)] / scale)
        .collect();
    Ok(EstimateCurve {
        grid: grid.to_vec(),
        values,
        method: Method::Direct,
        target: Target::N,
        n: sample.len(),
        delta: sample.delta,
        clip: Some(clip),
    })
}

/// Empirical tail function: counts below `t < 0` or above `t > 0`, scaled
/// by `(nΔ)⁻¹`. Grid points must stay at least `zeta` away from the origin.
pub fn direct_cal_n(sample: &IncrementSample, zeta: f64, grid: &[f64]) -> Result<EstimateCurve> {
    validate_grid(grid)?;
    if !(zeta > 0.0) {
        return Err(LevyError::config(format!(
            "zeta must be positive, got {zeta}"
        )));
    }
    if let Some(t) = grid.iter().find(|t| t.abs() < zeta) {
        return Err(LevyError::domain(format!(
            "grid point {t} lies inside (-{zeta}, {zeta})"
        )));
    }
    let mut sorted = sample.increments.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let scale = sample.horizon();
    let values = grid
        .iter()
        .map(|&t| {
            let count = if t < 0.0 {
                sorted.partition_point(|&x| x <= t)
            } else {
                n - sorted.partition_point(|&x| x < t)
            };
            count as f64 / scale
        })
        .collect();
    Ok(EstimateCurve {
        grid: grid.to_vec(),
        values,
        method: Method::Direct,
        target: Target::CalN,
        n,
        delta: sample.delta,
        clip: None,
    })
}

/// `((nΔ)⁻¹ Σ min(1, X_k⁴))^{1/2}`, the plug-in scale of the limiting
/// Brownian motion for the direct band.
pub fn direct_band_scale(sample: &IncrementSample) -> f64 {
    let total: f64 = sample
        .increments
        .iter()
        .map(|&x| (x * x * x * x).min(1.0))
        .sum();
    (total / sample.horizon()).sqrt()
}
