//! Monte-Carlo experiments: band coverage, estimator overlays and bias
//! sweeps.
//!
//! Replication `r` always draws its data from stream `r` of `base_seed`, and
//! per-replication results are reduced in index order, so outputs do not
//! depend on the size of the rayon pool running them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{linspace, EstimateCurve, Method};
use crate::direct::{direct_band_scale, direct_n};
use crate::error::{LevyError, Result};
use crate::inference::{confidence_band, BandResult, CoverageReport};
use crate::models::{ClipFunction, LevyModel, DEFAULT_TOL};
use crate::simulate::{sample_increments_stream, IncrementSample};
use crate::spectral::{SpectralConfig, SpectralDiagnostics, SpectralPipeline};

/// Evaluation grid for estimated curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// Equispaced over the central 99.9% of the sample joined with
    /// `[-3, 3]`, clipped to the spectral spatial range.
    Auto {
        points: usize,
    },
    Fixed {
        lo: f64,
        hi: f64,
        points: usize,
    },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Auto { points: 512 }
    }
}

impl GridSpec {
    pub fn points(&self) -> usize {
        match *self {
            GridSpec::Auto { points } | GridSpec::Fixed { points, .. } => points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points() < 2 {
            return Err(LevyError::config("a grid needs at least two points"));
        }
        if let GridSpec::Fixed { lo, hi, .. } = *self {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(LevyError::config(format!(
                    "fixed grid needs lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Resolves the grid for one sample; `limit` is the spatial half-range.
    pub fn resolve(&self, sample: &IncrementSample, limit: f64) -> Vec<f64> {
        match *self {
            GridSpec::Fixed { lo, hi, points } => linspace(lo, hi, points),
            GridSpec::Auto { points } => {
                let mut xs = sample.increments.clone();
                xs.sort_by(f64::total_cmp);
                let lo = empirical_quantile(&xs, 0.0005).min(-3.0).max(-limit);
                let hi = empirical_quantile(&xs, 0.9995).max(3.0).min(limit);
                linspace(lo, hi, points)
            }
        }
    }
}

/// Linear-interpolation quantile of sorted data.
fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let k = pos.floor() as usize;
    let frac = pos - k as f64;
    if k + 1 < sorted.len() {
        sorted[k] + frac * (sorted[k + 1] - sorted[k])
    } else {
        sorted[k]
    }
}

fn default_methods() -> Vec<Method> {
    vec![Method::Direct, Method::Spectral]
}

fn default_n() -> usize {
    2000
}

fn default_delta() -> f64 {
    0.01
}

fn default_reps() -> usize {
    500
}

fn default_level() -> f64 {
    0.9
}

fn default_seed() -> u64 {
    20_140_611
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_curves() -> usize {
    50
}

fn default_model() -> LevyModel {
    LevyModel::gamma(30.0, 1.0)
}

/// Everything needed to reproduce an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_model")]
    pub model: LevyModel,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    /// Target coverage `1 - α`.
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default)]
    pub clip: ClipFunction,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub spectral: SpectralConfig,
    #[serde(default = "default_tol")]
    pub truth_tol: f64,
    /// Sampling intervals for bias sweeps.
    #[serde(default)]
    pub deltas: Vec<f64>,
    /// Holds `nΔ` fixed across a sweep; `None` keeps `n` fixed instead.
    #[serde(default)]
    pub horizon: Option<f64>,
    /// Point at which the sweep reports the mean signed error.
    #[serde(default)]
    pub probe_t: Option<f64>,
    /// Curves drawn in an overlay figure.
    #[serde(default = "default_curves")]
    pub figure_curves: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| LevyError::config(format!("config file: {e}")))?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn alpha(&self) -> f64 {
        1.0 - self.level
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.spectral.validate()?;
        self.grid.validate()?;
        if self.n == 0 {
            return Err(LevyError::config("n must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(LevyError::config(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.reps == 0 {
            return Err(LevyError::config("reps must be at least 1"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(LevyError::config(format!(
                "level must lie in (0,1), got {}",
                self.level
            )));
        }
        if self.methods.is_empty() {
            return Err(LevyError::config("at least one method is required"));
        }
        if !(self.truth_tol > 0.0) {
            return Err(LevyError::config("truth_tol must be positive"));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0) {
                return Err(LevyError::config("horizon must be positive"));
            }
        }
        if self.deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(LevyError::config("every sweep delta must be positive"));
        }
        Ok(())
    }
}

/// Estimate plus band for one method on one sample.
#[derive(Clone, Debug)]
pub struct MethodOutput {
    pub band: BandResult,
    pub diagnostics: Option<SpectralDiagnostics>,
}

/// Estimates `N`, the band scale and the band on `grid`.
pub fn estimate_with_band(
    sample: &IncrementSample,
    method: Method,
    clip: ClipFunction,
    grid: &[f64],
    pipeline: Option<&SpectralPipeline>,
    alpha: f64,
) -> Result<MethodOutput> {
    let (curve, d, diagnostics): (EstimateCurve, f64, Option<SpectralDiagnostics>) = match method {
        Method::Direct => (
            direct_n(sample, clip, grid)?,
            direct_band_scale(sample),
            None,
        ),
        Method::Spectral => {
            let owned;
            let pipe = match pipeline {
                Some(p) => p,
                None => {
                    owned = SpectralPipeline::new(SpectralConfig::default(), sample.delta)?;
                    &owned
                }
            };
            let density = pipe.density(sample)?;
            let curve = density.n_curve(clip, grid, sample.len())?;
            let (d, clip_fraction) = density.band_scale();
            let mut diag = density.diagnostics;
            diag.band_clip_fraction = clip_fraction;
            (curve, d, Some(diag))
        }
    };
    let band = if d == 0.0 {
        BandResult::degenerate(curve, alpha)?
    } else {
        confidence_band(curve, d, alpha)?
    };
    Ok(MethodOutput { band, diagnostics })
}

/// Outcome of one method in one replication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RepOutcome {
    Hit,
    Miss,
    Failed,
}

fn pipeline_for(cfg: &ExperimentConfig, delta: f64) -> Result<Option<SpectralPipeline>> {
    if cfg.methods.contains(&Method::Spectral) {
        Ok(Some(SpectralPipeline::new(cfg.spectral, delta)?))
    } else {
        Ok(None)
    }
}

/// Runs the coverage experiment; returns one report per configured method.
///
/// All methods see the same samples. Replications whose estimation fails
/// are reported as failures, not misses.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<Vec<CoverageReport>> {
    let outcomes = coverage_outcomes(cfg)?;
    Ok(cfg
        .methods
        .iter()
        .enumerate()
        .map(|(m, &method)| {
            let count = |want: RepOutcome| outcomes.iter().filter(|row| row[m] == want).count();
            CoverageReport::from_counts(
                cfg.model.to_string(),
                method,
                cfg.n,
                cfg.delta,
                cfg.level,
                count(RepOutcome::Hit),
                count(RepOutcome::Miss),
                count(RepOutcome::Failed),
            )
        })
        .collect())
}

/// Per-replication outcomes, one row per replication and one column per
/// method, in replication order.
pub fn coverage_outcomes(cfg: &ExperimentConfig) -> Result<Vec<Vec<RepOutcome>>> {
    cfg.validate()?;
    let pipeline = pipeline_for(cfg, cfg.delta)?;
    let limit = cfg.spectral.x_range;
    (0..cfg.reps as u64)
        .into_par_iter()
        .map(|r| -> Result<Vec<RepOutcome>> {
            let sample = sample_increments_stream(&cfg.model, cfg.n, cfg.delta, cfg.base_seed, r)?;
            let grid = cfg.grid.resolve(&sample, limit);
            let truth = cfg.model.true_n_curve(cfg.clip, &grid, cfg.truth_tol)?;
            Ok(cfg
                .methods
                .iter()
                .map(|&method| {
                    match estimate_with_band(
                        &sample,
                        method,
                        cfg.clip,
                        &grid,
                        pipeline.as_ref(),
                        cfg.alpha(),
                    ) {
                        Ok(out) if out.band.contains(&truth) => RepOutcome::Hit,
                        Ok(_) => RepOutcome::Miss,
                        Err(e) if e.is_estimation_failure() => RepOutcome::Failed,
                        Err(_) => RepOutcome::Failed,
                    }
                })
                .collect())
        })
        .collect()
}

/// Estimator overlay for one method: many curves, the truth and the band of
/// the first replication.
#[derive(Clone, Debug, Serialize)]
pub struct FigurePanel {
    pub method: Method,
    pub grid: Vec<f64>,
    pub truth: Vec<f64>,
    pub curves: Vec<Vec<f64>>,
    pub band_lower: Vec<f64>,
    pub band_upper: Vec<f64>,
    pub half_width: f64,
}

/// Default plotting range for the overlay figure.
pub fn figure_range(model: &LevyModel) -> (f64, f64) {
    match model.kind {
        crate::models::ModelKind::Nig { .. } => (-2.0, 2.0),
        _ => (-3.0, 3.0),
    }
}

/// Builds one overlay panel per configured method over a common grid.
pub fn run_figure(cfg: &ExperimentConfig) -> Result<Vec<FigurePanel>> {
    cfg.validate()?;
    if cfg.figure_curves == 0 {
        return Err(LevyError::config("the figure needs at least one curve"));
    }
    let grid = match cfg.grid {
        GridSpec::Fixed { lo, hi, points } => linspace(lo, hi, points),
        GridSpec::Auto { points } => {
            let (lo, hi) = figure_range(&cfg.model);
            linspace(lo, hi, points)
        }
    };
    let truth = cfg.model.true_n_curve(cfg.clip, &grid, cfg.truth_tol)?;
    let pipeline = pipeline_for(cfg, cfg.delta)?;
    let outputs: Vec<Vec<MethodOutput>> = (0..cfg.figure_curves as u64)
        .into_par_iter()
        .map(|r| {
            let sample = sample_increments_stream(&cfg.model, cfg.n, cfg.delta, cfg.base_seed, r)?;
            cfg.methods
                .iter()
                .map(|&m| {
                    estimate_with_band(&sample, m, cfg.clip, &grid, pipeline.as_ref(), cfg.alpha())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(cfg
        .methods
        .iter()
        .enumerate()
        .map(|(m, &method)| {
            let first = &outputs[0][m].band;
            FigurePanel {
                method,
                grid: grid.clone(),
                truth: truth.clone(),
                curves: outputs
                    .iter()
                    .map(|o| o[m].band.curve.values.clone())
                    .collect(),
                band_lower: first.lower(),
                band_upper: first.upper(),
                half_width: first.half_width,
            }
        })
        .collect())
}

/// One row of a bias sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasRow {
    pub method: Method,
    pub delta: f64,
    pub n: usize,
    pub reps: usize,
    /// Mean over replications of `sup_t |estimate - truth|`.
    pub mean_sup_error: f64,
    /// `sup_t |mean estimate - truth|`, the bias of the averaged curve.
    pub sup_bias: f64,
    /// Mean of `estimate(probe_t) - truth(probe_t)`, if a probe was set.
    pub mean_signed_error_at_probe: Option<f64>,
}

/// Sup-bias against Δ on a fixed grid (an `auto` grid falls back to the
/// figure range).
pub fn run_bias_sweep(cfg: &ExperimentConfig) -> Result<Vec<BiasRow>> {
    cfg.validate()?;
    if cfg.deltas.len() < 2 {
        return Err(LevyError::config(
            "a bias sweep needs at least two values of delta",
        ));
    }
    let mut grid = match cfg.grid {
        GridSpec::Fixed { lo, hi, points } => linspace(lo, hi, points),
        GridSpec::Auto { points } => {
            let (lo, hi) = figure_range(&cfg.model);
            linspace(lo, hi, points)
        }
    };
    let probe_index = match cfg.probe_t {
        Some(t) => {
            let pos = grid.partition_point(|&g| g < t);
            if grid.get(pos) != Some(&t) {
                grid.insert(pos, t);
            }
            Some(pos)
        }
        None => None,
    };
    let truth = cfg.model.true_n_curve(cfg.clip, &grid, cfg.truth_tol)?;
    let mut rows = Vec::new();
    for &delta in &cfg.deltas {
        let n = match cfg.horizon {
            Some(h) => ((h / delta).round() as usize).max(1),
            None => cfg.n,
        };
        let pipeline = pipeline_for(cfg, delta)?;
        let curves: Vec<Vec<Vec<f64>>> = (0..cfg.reps as u64)
            .into_par_iter()
            .map(|r| {
                let sample = sample_increments_stream(&cfg.model, n, delta, cfg.base_seed, r)?;
                cfg.methods
                    .iter()
                    .map(|&m| {
                        estimate_with_band(
                            &sample,
                            m,
                            cfg.clip,
                            &grid,
                            pipeline.as_ref(),
                            cfg.alpha(),
                        )
                        .map(|o| o.band.curve.values)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (m, &method) in cfg.methods.iter().enumerate() {
            let reps = curves.len() as f64;
            let mut mean = vec![0.0; grid.len()];
            let mut sup_sum = 0.0;
            for rep in &curves {
                let values = &rep[m];
                sup_sum += values
                    .iter()
                    .zip(&truth)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                for (acc, v) in mean.iter_mut().zip(values) {
                    *acc += v;
                }
            }
            mean.iter_mut().for_each(|v| *v /= reps);
            let sup_bias = mean
                .iter()
                .zip(&truth)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            rows.push(BiasRow {
                method,
                delta,
                n,
                reps: cfg.reps,
                mean_sup_error: sup_sum / reps,
                sup_bias,
                mean_signed_error_at_probe: probe_index.map(|k| mean[k] - truth[k]),
            });
        }
    }
    Ok(rows)
}

/// Smoothing bias of the spectral estimator with the exact characteristic
/// function in place of the empirical one: `sup_t |N̂(t) - N(t)|` per
/// bandwidth.
pub fn oracle_smoothing_bias(
    model: &LevyModel,
    delta: f64,
    clip: ClipFunction,
    grid: &[f64],
    base: SpectralConfig,
    bandwidths: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let truth = model.true_n_curve(clip, grid, tol)?;
    bandwidths
        .iter()
        .map(|&h| {
            let pipe = SpectralPipeline::new(SpectralConfig { h: Some(h), ..base }, delta)?;
            let density = pipe.density_from_cf(&pipe.model_cf(model), model.sigma2)?;
            let curve = density.n_curve(clip, grid, 1)?;
            Ok((h, curve.sup_distance(&truth)))
        })
        .collect()
}
