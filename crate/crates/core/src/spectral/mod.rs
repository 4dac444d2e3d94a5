//! Spectral estimation of `x²ν` through the Lévy–Khintchine representation.
//!
//! The pipeline plugs the empirical characteristic function into
//! `ψ'' = (φ''φ - φ'²)/(Δφ²)`, removes the diffusion part, damps the result
//! with a band-limited flat-top kernel and inverts the Fourier transform on a
//! spatial grid. Integrating the resulting smoothed density against the
//! appropriate weight yields `N̂(t)`, the tail function and the band scale.

mod ecf;
mod fourier;
mod kernel;

pub use ecf::{ecf_symmetric_grid, ecf_with_derivatives, psi_dd_hat, CfValues, PsiDd};
pub use fourier::InverseFourierPlan;
pub use kernel::flat_top_kernel_ft;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{validate_grid, EstimateCurve, Method, Target};
use crate::error::{LevyError, Result};
use crate::models::{ClipFunction, LevyModel};
use crate::simulate::IncrementSample;

/// How the diffusion coefficient is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SigmaMode {
    Known { sigma2: f64 },
    Estimate { c0: f64, sigma_max: f64 },
    #[default]
    Zero,
}

impl std::str::FromStr for SigmaMode {
    type Err = LevyError;

    /// `zero`, `estimate`, or `known:<value>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("zero") {
            return Ok(SigmaMode::Zero);
        }
        if s.eq_ignore_ascii_case("estimate") {
            return Ok(SigmaMode::Estimate {
                c0: DEFAULT_C0,
                sigma_max: DEFAULT_SIGMA_MAX,
            });
        }
        if let Some(v) = s.strip_prefix("known:") {
            let sigma2: f64 = v
                .trim()
                .parse()
                .map_err(|_| LevyError::config(format!("`{v}` is not a number")))?;
            if sigma2 >= 0.0 && sigma2.is_finite() {
                return Ok(SigmaMode::Known { sigma2 });
            }
            return Err(LevyError::config("known sigma2 must be >= 0"));
        }
        Err(LevyError::config(format!(
            "expected zero, estimate or known:<v>, got `{s}`"
        )))
    }
}

pub const DEFAULT_C0: f64 = 1.0 / 6.0;
pub const DEFAULT_SIGMA_MAX: f64 = 1.0;

/// Tuning of the spectral pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralConfig {
    /// Bandwidth; `None` means `sqrt(delta)`.
    pub h: Option<f64>,
    pub c_flat: f64,
    pub u_points: usize,
    pub x_range: f64,
    pub x_points: usize,
    pub cf_floor: f64,
    pub sigma: SigmaMode,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            h: None,
            c_flat: 0.5,
            u_points: 4096,
            x_range: 8.0,
            x_points: 8192,
            cf_floor: 1e-12,
            sigma: SigmaMode::Zero,
        }
    }
}

impl SpectralConfig {
    pub fn bandwidth(&self, delta: f64) -> f64 {
        self.h.unwrap_or_else(|| delta.sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(LevyError::config(format!(
                    "bandwidth must be positive, got {h}"
                )));
            }
        }
        if !(self.c_flat > 0.0 && self.c_flat < 1.0) {
            return Err(LevyError::config(format!(
                "c_flat must lie in (0,1), got {}",
                self.c_flat
            )));
        }
        if self.u_points < 4 || !self.u_points.is_multiple_of(2) {
            return Err(LevyError::config(format!(
                "u_points must be even and >= 4, got {}",
                self.u_points
            )));
        }
        if !(self.x_range > 0.0 && self.x_range.is_finite()) {
            return Err(LevyError::config(format!(
                "x_range must be positive, got {}",
                self.x_range
            )));
        }
        if self.x_points < 4 || !self.x_points.is_power_of_two() {
            return Err(LevyError::config(format!(
                "x_points must be a power of two >= 4, got {}",
                self.x_points
            )));
        }
        if !(self.cf_floor > 0.0) {
            return Err(LevyError::config("cf_floor must be positive"));
        }
        match self.sigma {
            SigmaMode::Known { sigma2 } if !(sigma2 >= 0.0 && sigma2.is_finite()) => {
                Err(LevyError::config("known sigma2 must be >= 0"))
            }
            SigmaMode::Estimate { c0, sigma_max } if !(c0 > 0.0 && c0 < 0.5 && sigma_max > 0.0) => {
                Err(LevyError::config(
                    "sigma estimation needs c0 in (0, 1/2) and sigma_max > 0",
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Pilot estimate of σ² from the modulus of the empirical characteristic
/// function at `u_n = sqrt(2 c0 log n / (Δ σ_max²))`, truncated at zero.
pub fn sigma2_hat(sample: &IncrementSample, c0: f64, sigma_max: f64) -> Result<f64> {
    let n = sample.len();
    if n < 2 {
        return Err(LevyError::config(
            "sigma estimation needs at least two increments",
        ));
    }
    if !(c0 > 0.0 && c0 < 0.5) || !(sigma_max > 0.0) {
        return Err(LevyError::config(
            "sigma estimation needs c0 in (0, 1/2) and sigma_max > 0",
        ));
    }
    let delta = sample.delta;
    let u2 = 2.0 * c0 * (n as f64).ln() / (delta * sigma_max * sigma_max);
    let u = u2.sqrt();
    let phi = ecf_with_derivatives(&sample.increments, &[u]).phi[0];
    let modulus = phi.norm();
    if modulus == 0.0 {
        return Err(LevyError::EstimationFailure(format!(
            "empirical characteristic function vanishes at u_n = {u}"
        )));
    }
    Ok((-2.0 / (delta * u2) * modulus.ln()).max(0.0))
}

/// Run-level numbers reported next to spectral estimates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralDiagnostics {
    pub bandwidth: f64,
    pub sigma2_hat: f64,
    pub guarded_frequencies: usize,
    /// `max |Im f(x)|` of the inverse transform.
    pub max_imag_residue: f64,
    pub max_real_magnitude: f64,
    /// Share of the band-scale integrand removed by clipping negatives.
    pub band_clip_fraction: f64,
}

/// Grids, kernel weights and transform plan for a fixed `(config, Δ)`.
///
/// Building the pipeline once and reusing it across replications avoids
/// replanning the FFTs.
#[derive(Clone, Debug)]
pub struct SpectralPipeline {
    config: SpectralConfig,
    delta: f64,
    h: f64,
    u_max: f64,
    /// Trapezoid weight times kernel transform at each frequency.
    taper: Vec<f64>,
    plan: InverseFourierPlan,
}

impl SpectralPipeline {
    pub fn new(config: SpectralConfig, delta: f64) -> Result<Self> {
        config.validate()?;
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(LevyError::config(format!(
                "delta must be positive, got {delta}"
            )));
        }
        let h = config.bandwidth(delta);
        let u_max = 1.0 / h;
        let p = config.u_points;
        let du = 2.0 * u_max / (p - 1) as f64;
        let taper = (0..p)
            .map(|j| {
                let u = -u_max + j as f64 * du;
                let w = if j == 0 || j == p - 1 { 0.5 } else { 1.0 };
                w * flat_top_kernel_ft(h * u, config.c_flat)
            })
            .collect();
        let m = config.x_points;
        let dx = 2.0 * config.x_range / m as f64;
        let plan = InverseFourierPlan::new(-u_max, du, p, -config.x_range, dx, m);
        Ok(SpectralPipeline {
            config,
            delta,
            h,
            u_max,
            taper,
            plan,
        })
    }

    pub fn config(&self) -> &SpectralConfig {
        &self.config
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn frequency_grid(&self) -> Vec<f64> {
        self.plan.frequency_grid()
    }

    pub fn spatial_grid(&self) -> Vec<f64> {
        self.plan.spatial_grid()
    }

    /// Empirical characteristic function on the frequency grid.
    pub fn empirical_cf(&self, sample: &IncrementSample) -> CfValues {
        ecf_symmetric_grid(&sample.increments, self.u_max, self.config.u_points)
    }

    /// Exact characteristic function of `model` on the frequency grid.
    pub fn model_cf(&self, model: &LevyModel) -> CfValues {
        let mut cf = CfValues {
            phi: vec![],
            d1: vec![],
            d2: vec![],
        };
        for u in self.frequency_grid() {
            let [phi, d1, d2] = model.cf_with_derivatives(u, self.delta);
            cf.phi.push(phi);
            cf.d1.push(d1);
            cf.d2.push(d2);
        }
        cf
    }

    /// Resolves σ̂² for `sample` according to the configured mode.
    pub fn resolve_sigma2(&self, sample: &IncrementSample) -> Result<f64> {
        match self.config.sigma {
            SigmaMode::Known { sigma2 } => Ok(sigma2),
            SigmaMode::Zero => Ok(0.0),
            SigmaMode::Estimate { c0, sigma_max } => sigma2_hat(sample, c0, sigma_max),
        }
    }

    /// Smoothed estimate of `x²ν` (plus any leftover `σ²δ_0`) from a sample.
    pub fn density(&self, sample: &IncrementSample) -> Result<SpectralDensity> {
        if (sample.delta - self.delta).abs() > 1e-12 * self.delta {
            return Err(LevyError::config(format!(
                "pipeline built for delta = {} but sample has delta = {}",
                self.delta, sample.delta
            )));
        }
        let sigma2 = self.resolve_sigma2(sample)?;
        self.density_from_cf(&self.empirical_cf(sample), sigma2)
    }

    /// Same as [`Self::density`] but from given characteristic-function values,
    /// e.g. the exact ones of a model.
    pub fn density_from_cf(&self, cf: &CfValues, sigma2: f64) -> Result<SpectralDensity> {
        if cf.len() != self.config.u_points {
            return Err(LevyError::config(
                "characteristic function does not match the frequency grid",
            ));
        }
        let psi = psi_dd_hat(cf, self.delta, self.config.cf_floor)?;
        let weighted: Vec<Complex64> = psi
            .values
            .iter()
            .zip(&self.taper)
            .map(|(&p, &w)| (-p - sigma2) * w)
            .collect();
        let raw = self.plan.apply(&weighted);
        let values: Vec<f64> = raw.iter().map(|z| z.re).collect();
        let max_imag_residue = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let max_real_magnitude = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Ok(SpectralDensity {
            x: self.spatial_grid(),
            dx: 2.0 * self.config.x_range / self.config.x_points as f64,
            values,
            delta: self.delta,
            diagnostics: SpectralDiagnostics {
                bandwidth: self.h,
                sigma2_hat: sigma2,
                guarded_frequencies: psi.guarded,
                max_imag_residue,
                max_real_magnitude,
                band_clip_fraction: 0.0,
            },
        })
    }
}

/// Smoothed density `F⁻¹[(-ψ̂'' - σ̂²) FK_h]` on the spatial grid.
#[derive(Clone, Debug)]
pub struct SpectralDensity {
    pub x: Vec<f64>,
    pub dx: f64,
    pub values: Vec<f64>,
    pub delta: f64,
    pub diagnostics: SpectralDiagnostics,
}

impl SpectralDensity {
    fn x_min(&self) -> f64 {
        self.x[0]
    }

    fn x_max(&self) -> f64 {
        self.x[0] + self.dx * self.x.len() as f64
    }

    fn check_range(&self, grid: &[f64]) -> Result<()> {
        let (lo, hi) = (self.x_min(), self.x_max());
        match grid.iter().find(|&&t| t < lo || t > hi) {
            Some(t) => Err(LevyError::config(format!(
                "grid point {t} outside the spectral range [{lo}, {hi}]"
            ))),
            None => Ok(()),
        }
    }

    /// Position of `t` as (node index, fractional offset), clamped to the grid.
    fn locate(&self, t: f64) -> (usize, f64) {
        let last = self.x.len() - 1;
        let pos = (t - self.x_min()) / self.dx;
        if pos <= 0.0 {
            (0, 0.0)
        } else if pos >= last as f64 {
            (last, 0.0)
        } else {
            let k = pos.floor() as usize;
            (k, pos - k as f64)
        }
    }

    /// `t ↦ ∫_{-A}^t ρ(x) f(x) dx`.
    pub fn n_curve(&self, clip: ClipFunction, grid: &[f64], n: usize) -> Result<EstimateCurve> {
        validate_grid(grid)?;
        self.check_range(grid)?;
        let cumulative = cumulative_trapezoid(
            self.x
                .iter()
                .zip(&self.values)
                .map(|(&x, &f)| clip.eval(x) * f),
            self.dx,
        );
        let values = grid
            .iter()
            .map(|&t| self.interpolate(&cumulative, t))
            .collect();
        Ok(EstimateCurve {
            grid: grid.to_vec(),
            values,
            method: Method::Spectral,
            target: Target::N,
            n,
            delta: self.delta,
            clip: Some(clip),
        })
    }

    fn interpolate(&self, cumulative: &[f64], t: f64) -> f64 {
        let (k, frac) = self.locate(t);
        if frac == 0.0 {
            cumulative[k]
        } else {
            cumulative[k] + frac * (cumulative[k + 1] - cumulative[k])
        }
    }

    /// Tail function: `∫ x⁻² f` over `(-A, t]` for `t < 0` and over `[t, A)`
    /// for `t > 0`. Requires `zeta` to span at least ten grid cells.
    pub fn cal_n_curve(&self, zeta: f64, grid: &[f64], n: usize) -> Result<EstimateCurve> {
        validate_grid(grid)?;
        self.check_range(grid)?;
        if !(zeta >= 10.0 * self.dx) {
            return Err(LevyError::config(format!(
                "zeta = {zeta} is below ten spatial grid cells ({})",
                10.0 * self.dx
            )));
        }
        if let Some(t) = grid.iter().find(|t| t.abs() < zeta) {
            return Err(LevyError::domain(format!(
                "grid point {t} lies inside (-{zeta}, {zeta})"
            )));
        }
        let weighted: Vec<f64> = self
            .x
            .iter()
            .zip(&self.values)
            .map(|(&x, &f)| if x == 0.0 { 0.0 } else { f / (x * x) })
            .collect();
        // left tail accumulated from -A; the right tail is total-to-the-right
        let left = cumulative_trapezoid(weighted.iter().copied(), self.dx);
        let right_rev = cumulative_trapezoid(weighted.iter().rev().copied(), self.dx);
        let last = self.x.len() - 1;
        let values = grid
            .iter()
            .map(|&t| {
                if t < 0.0 {
                    self.interpolate(&left, t)
                } else {
                    let (k, frac) = self.locate(t);
                    // right_rev[last - k] = ∫_{x_k}^{x_last}
                    let at_k = right_rev[last - k];
                    if frac == 0.0 {
                        at_k
                    } else {
                        let at_next = right_rev[last - k - 1];
                        at_k + frac * (at_next - at_k)
                    }
                }
            })
            .collect();
        Ok(EstimateCurve {
            grid: grid.to_vec(),
            values,
            method: Method::Spectral,
            target: Target::CalN,
            n,
            delta: self.delta,
            clip: None,
        })
    }

    /// `(∫ min(x⁻², x²) f(x) dx)^{1/2}` with negative integrand values set to
    /// zero. Returns the scale and the clipped share of the integrand.
    pub fn band_scale(&self) -> (f64, f64) {
        let mut kept = 0.0;
        let mut clipped = 0.0;
        let n = self.x.len();
        for (k, (&x, &f)) in self.x.iter().zip(&self.values).enumerate() {
            let x2 = x * x;
            let weight = if x == 0.0 { 0.0 } else { x2.min(1.0 / x2) };
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            let g = w * weight * f;
            if g >= 0.0 {
                kept += g;
            } else {
                clipped -= g;
            }
        }
        let total = kept + clipped;
        let fraction = if total > 0.0 { clipped / total } else { 0.0 };
        ((kept * self.dx).sqrt(), fraction)
    }
}

fn cumulative_trapezoid<I: Iterator<Item = f64>>(values: I, dx: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut acc = 0.0;
    let mut prev: Option<f64> = None;
    for v in values {
        if let Some(p) = prev {
            acc += 0.5 * dx * (p + v);
        }
        out.push(acc);
        prev = Some(v);
    }
    out
}

/// Smoothed density estimate for a sample.
pub fn spectral_density_on_grid(
    sample: &IncrementSample,
    cfg: &SpectralConfig,
) -> Result<SpectralDensity> {
    SpectralPipeline::new(*cfg, sample.delta)?.density(sample)
}

/// `N̂(t)` on `grid`, with run diagnostics.
pub fn spectral_n(
    sample: &IncrementSample,
    cfg: &SpectralConfig,
    clip: ClipFunction,
    grid: &[f64],
) -> Result<(EstimateCurve, SpectralDiagnostics)> {
    let density = spectral_density_on_grid(sample, cfg)?;
    Ok((
        density.n_curve(clip, grid, sample.len())?,
        density.diagnostics,
    ))
}

/// Spectral estimate of the tail function on `grid`.
pub fn spectral_cal_n(
    sample: &IncrementSample,
    cfg: &SpectralConfig,
    zeta: f64,
    grid: &[f64],
) -> Result<(EstimateCurve, SpectralDiagnostics)> {
    let density = spectral_density_on_grid(sample, cfg)?;
    Ok((
        density.cal_n_curve(zeta, grid, sample.len())?,
        density.diagnostics,
    ))
}

/// Plug-in band scale `d̂`.
pub fn spectral_band_scale(sample: &IncrementSample, cfg: &SpectralConfig) -> Result<f64> {
    Ok(spectral_density_on_grid(sample, cfg)?.band_scale().0)
}
