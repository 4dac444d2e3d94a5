//! Parametric Lévy models and their ground-truth jump-measure functionals.
//!
//! A model is the triplet (σ², drift, ν). The jump measure ν comes from one
//! of a small set of families whose densities are known in closed form; the
//! functionals `N_ρ(t)`, the tail function and the clipped moments are
//! obtained by adaptive quadrature against that density.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LevyError, Result};
use crate::quadrature::integrate_with_breaks;
use crate::special::bessel_k1_scaled;

/// Default absolute tolerance for ground-truth quadrature.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tail mass of `x²ν` that may be dropped beyond the integration cutoff.
const TAIL_MASS: f64 = 1e-14;

/// Jump-measure family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// ν(x) = (c/x) e^{-λx} on x > 0.
    Gamma { c: f64, lambda: f64 },
    /// Brownian motion with volatility `s` and drift `theta`, time-changed by
    /// an inverse Gaussian subordinator with unit mean rate and variance rate
    /// `kappa`.
    Nig { s: f64, theta: f64, kappa: f64 },
    /// Jumps arrive at rate `intensity` with sizes Normal(`mean`, `sd`²).
    CompoundPoissonGauss { intensity: f64, mean: f64, sd: f64 },
    /// No jumps.
    BrownianOnly,
}

/// A Lévy process given by its characteristic triplet.
///
/// `drift` is a deterministic drift per unit time added on top of the jump
/// part, so that `E[L_1]` equals the mean of the jump family plus `drift`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevyModel {
    #[serde(flatten)]
    pub kind: ModelKind,
    #[serde(default)]
    pub sigma2: f64,
    #[serde(default)]
    pub drift: f64,
}

/// Standard NIG parameters (α, β, δ) implied by the subordination form.
#[derive(Clone, Copy, Debug)]
struct NigShape {
    alpha: f64,
    beta: f64,
    delta: f64,
}

impl NigShape {
    fn new(s: f64, theta: f64, kappa: f64) -> Self {
        let s2 = s * s;
        NigShape {
            alpha: (theta * theta + s2 / kappa).sqrt() / s2,
            beta: theta / s2,
            delta: s / kappa.sqrt(),
        }
    }
}

impl LevyModel {
    pub fn gamma(c: f64, lambda: f64) -> Self {
        Self::pure(ModelKind::Gamma { c, lambda })
    }

    pub fn nig(s: f64, theta: f64, kappa: f64) -> Self {
        Self::pure(ModelKind::Nig { s, theta, kappa })
    }

    pub fn compound_poisson_gauss(intensity: f64, mean: f64, sd: f64) -> Self {
        Self::pure(ModelKind::CompoundPoissonGauss {
            intensity,
            mean,
            sd,
        })
    }

    pub fn brownian(sigma2: f64) -> Self {
        LevyModel {
            kind: ModelKind::BrownianOnly,
            sigma2,
            drift: 0.0,
        }
    }

    fn pure(kind: ModelKind) -> Self {
        LevyModel {
            kind,
            sigma2: 0.0,
            drift: 0.0,
        }
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }

    pub fn with_drift(mut self, drift: f64) -> Self {
        self.drift = drift;
        self
    }

    /// Checks parameter admissibility.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(LevyError::config(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        }
        fn finite(name: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(LevyError::config(format!("{name} must be finite, got {v}")))
            }
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(LevyError::config(format!(
                "sigma2 must be >= 0, got {}",
                self.sigma2
            )));
        }
        finite("drift", self.drift)?;
        match self.kind {
            ModelKind::Gamma { c, lambda } => {
                positive("c", c)?;
                positive("lambda", lambda)
            }
            ModelKind::Nig { s, theta, kappa } => {
                positive("s", s)?;
                finite("theta", theta)?;
                positive("kappa", kappa)
            }
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => {
                if !(intensity >= 0.0 && intensity.is_finite()) {
                    return Err(LevyError::config(format!(
                        "intensity must be >= 0, got {intensity}"
                    )));
                }
                finite("mean", mean)?;
                positive("sd", sd)
            }
            ModelKind::BrownianOnly => Ok(()),
        }
    }

    /// Short identifier used in file names and reports.
    pub fn tag(&self) -> &'static str {
        match self.kind {
            ModelKind::Gamma { .. } => "gamma",
            ModelKind::Nig { .. } => "nig",
            ModelKind::CompoundPoissonGauss { .. } => "cpg",
            ModelKind::BrownianOnly => "brownian",
        }
    }

    /// Lévy density ν(x). Undefined at the origin.
    pub fn levy_density(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(LevyError::domain(
                "the Lévy density is not defined at x = 0",
            ));
        }
        Ok(self.density_unchecked(x))
    }

    fn density_unchecked(&self, x: f64) -> f64 {
        match self.kind {
            ModelKind::Gamma { c, lambda } => {
                if x > 0.0 {
                    c / x * (-lambda * x).exp()
                } else {
                    0.0
                }
            }
            ModelKind::Nig { s, theta, kappa } => {
                let NigShape { alpha, beta, delta } = NigShape::new(s, theta, kappa);
                let z = alpha * x.abs();
                delta * alpha / PI * (beta * x - z).exp() * bessel_k1_scaled(z) / x.abs()
            }
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => {
                let z = (x - mean) / sd;
                intensity * (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
            }
            ModelKind::BrownianOnly => 0.0,
        }
    }

    /// `x² ν(x)`, extended continuously to the origin.
    pub fn x2_density(&self, x: f64) -> f64 {
        if x != 0.0 {
            return x * x * self.density_unchecked(x);
        }
        match self.kind {
            ModelKind::Nig { s, theta, kappa } => NigShape::new(s, theta, kappa).delta / PI,
            _ => 0.0,
        }
    }

    /// Integration window `[lo, hi]` outside which `x²ν` carries less than
    /// 1e-14 mass on each side. A side without jumps collapses to 0.
    pub fn support_cutoffs(&self) -> (f64, f64) {
        match self.kind {
            ModelKind::Gamma { c, lambda } => {
                // ∫_X^∞ c x e^{-λx} dx = c (X/λ + 1/λ²) e^{-λX}
                let hi = scan_cutoff(|x| {
                    c * (x / lambda + 1.0 / (lambda * lambda)) * (-lambda * x).exp()
                });
                (0.0, hi)
            }
            ModelKind::Nig { s, theta, kappa } => {
                let NigShape { alpha, beta, delta } = NigShape::new(s, theta, kappa);
                // K_1(z) <= sqrt(π/2z) e^{-z} (1 + 1/z); the tail of x^{1/2} e^{-rx}
                // is bounded by 2 X^{1/2} e^{-rX} / r for X >= 1/r.
                let pref = delta * alpha / PI * (PI / (2.0 * alpha)).sqrt();
                let bound = |r: f64| {
                    move |x: f64| {
                        let x = x.max(1.0 / r);
                        pref * (1.0 + 1.0 / (alpha * x)) * 2.0 * x.sqrt() / r * (-r * x).exp()
                    }
                };
                (
                    -scan_cutoff(bound(alpha + beta)),
                    scan_cutoff(bound(alpha - beta)),
                )
            }
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => {
                if intensity == 0.0 {
                    return (0.0, 0.0);
                }
                // Beyond 16 standard deviations the Gaussian tail is below 1e-56.
                let reach = mean.abs() + 16.0 * sd + 1.0;
                (-reach, reach)
            }
            ModelKind::BrownianOnly => (0.0, 0.0),
        }
    }

    /// `N_ρ(t) = ∫_{-∞}^t ρ(x) x² ν(dx)`. Infinite `t` is allowed.
    pub fn true_n(&self, clip: ClipFunction, t: f64, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        if t.is_nan() {
            return Err(LevyError::domain("t is NaN"));
        }
        let (lo, hi) = self.support_cutoffs();
        let upper = t.min(hi);
        if upper <= lo {
            return Ok(0.0);
        }
        let f = |x: f64| clip.eval(x) * self.x2_density(x);
        integrate_with_breaks(&f, lo, upper, &[-1.0, 0.0, 1.0], tol)
    }

    /// `N_ρ` on an increasing grid, accumulated interval by interval.
    pub fn true_n_curve(&self, clip: ClipFunction, grid: &[f64], tol: f64) -> Result<Vec<f64>> {
        check_tol(tol)?;
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(LevyError::config("grid must be strictly increasing"));
        }
        let Some(&first) = grid.first() else {
            return Ok(Vec::new());
        };
        let (lo, hi) = self.support_cutoffs();
        let piece_tol = tol / grid.len() as f64;
        let f = |x: f64| clip.eval(x) * self.x2_density(x);
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = self.true_n(clip, first, piece_tol)?;
        out.push(acc);
        for w in grid.windows(2) {
            let a = w[0].max(lo);
            let b = w[1].min(hi);
            if b > a {
                acc += integrate_with_breaks(&f, a, b, &[-1.0, 0.0, 1.0], piece_tol)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Tail function: ν((-∞, t]) for t < 0 and ν([t, ∞)) for t > 0.
    pub fn true_cal_n(&self, t: f64, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        if t == 0.0 || t.is_nan() {
            return Err(LevyError::domain(
                "the tail function is not defined at t = 0",
            ));
        }
        let (lo, hi) = self.support_cutoffs();
        let f = |x: f64| self.density_unchecked(x);
        if t < 0.0 {
            integrate_with_breaks(&f, lo, t.min(0.0), &[-1.0], tol)
        } else {
            integrate_with_breaks(&f, t.max(0.0), hi, &[1.0], tol)
        }
    }

    /// ∫ x² ν(dx), in closed form.
    pub fn second_moment_nu(&self) -> f64 {
        match self.kind {
            ModelKind::Gamma { c, lambda } => c / (lambda * lambda),
            ModelKind::Nig { s, theta, kappa } => s * s + theta * theta * kappa,
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => intensity * (mean * mean + sd * sd),
            ModelKind::BrownianOnly => 0.0,
        }
    }

    /// ∫ min(1, x⁴) ν(dx), the variance scale of the limiting process.
    pub fn clipped_fourth_moment(&self, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        let (lo, hi) = self.support_cutoffs();
        let f = |x: f64| (x * x).min(1.0 / (x * x)) * self.x2_density(x);
        integrate_with_breaks(&f, lo, hi, &[-1.0, 0.0, 1.0], tol)
    }

    /// Mean of `L_1`.
    pub fn mean_per_unit_time(&self) -> f64 {
        self.drift
            + match self.kind {
                ModelKind::Gamma { c, lambda } => c / lambda,
                ModelKind::Nig { theta, .. } => theta,
                ModelKind::CompoundPoissonGauss {
                    intensity, mean, ..
                } => intensity * mean,
                ModelKind::BrownianOnly => 0.0,
            }
    }

    /// Characteristic exponent ψ(u) and its first two derivatives, so that
    /// `E exp(iuL_Δ) = exp(Δψ(u))`.
    pub fn char_exponent(&self, u: f64) -> [Complex64; 3] {
        let i = Complex64::i();
        let diffusion = [
            Complex64::new(-0.5 * self.sigma2 * u * u, self.drift * u),
            Complex64::new(-self.sigma2 * u, self.drift),
            Complex64::new(-self.sigma2, 0.0),
        ];
        let jumps = match self.kind {
            ModelKind::Gamma { c, lambda } => {
                let w = Complex64::new(lambda, -u);
                [-c * (w / lambda).ln(), i * c / w, -c / (w * w)]
            }
            ModelKind::Nig { s, theta, kappa } => {
                let w = Complex64::new(1.0 + kappa * s * s * u * u, -2.0 * kappa * theta * u);
                let dw = Complex64::new(2.0 * kappa * s * s * u, -2.0 * kappa * theta);
                let ddw = 2.0 * kappa * s * s;
                let root = w.sqrt();
                [
                    -(root - 1.0) / kappa,
                    -dw / (2.0 * kappa * root),
                    -(ddw / (2.0 * root) - dw * dw / (4.0 * w * root)) / kappa,
                ]
            }
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => {
                let v = sd * sd;
                let cf = Complex64::new(-0.5 * v * u * u, mean * u).exp();
                let d1 = Complex64::new(-v * u, mean);
                [
                    intensity * (cf - 1.0),
                    intensity * d1 * cf,
                    intensity * (d1 * d1 - v) * cf,
                ]
            }
            ModelKind::BrownianOnly => [Complex64::new(0.0, 0.0); 3],
        };
        [
            diffusion[0] + jumps[0],
            diffusion[1] + jumps[1],
            diffusion[2] + jumps[2],
        ]
    }

    /// Characteristic function of an increment over `delta` and its first two
    /// derivatives in `u`.
    pub fn cf_with_derivatives(&self, u: f64, delta: f64) -> [Complex64; 3] {
        let [psi, d1, d2] = self.char_exponent(u);
        let phi = (delta * psi).exp();
        [
            phi,
            delta * d1 * phi,
            (delta * d2 + delta * delta * d1 * d1) * phi,
        ]
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(LevyError::config(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Smallest X ≥ 1 on a 1/8 lattice with `tail_bound(X) < TAIL_MASS`.
fn scan_cutoff<F: Fn(f64) -> f64>(tail_bound: F) -> f64 {
    let mut x = 1.0;
    while tail_bound(x) >= TAIL_MASS && x < 1e6 {
        x += 0.125;
    }
    x
}

impl fmt::Display for LevyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Gamma { c, lambda } => write!(f, "gamma:c={c},lambda={lambda}")?,
            ModelKind::Nig { s, theta, kappa } => {
                write!(f, "nig:s={s},theta={theta},kappa={kappa}")?
            }
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => write!(f, "cpg:intensity={intensity},mean={mean},sd={sd}")?,
            ModelKind::BrownianOnly => write!(f, "brownian:sigma2={}", self.sigma2)?,
        }
        if !matches!(self.kind, ModelKind::BrownianOnly) && self.sigma2 != 0.0 {
            write!(f, ",sigma2={}", self.sigma2)?;
        }
        if self.drift != 0.0 {
            write!(f, ",drift={}", self.drift)?;
        }
        Ok(())
    }
}

impl FromStr for LevyModel {
    type Err = LevyError;

    /// Parses `family:key=value,...`, e.g. `gamma:c=30,lambda=1` or
    /// `nig:s=1.5,theta=0.1,kappa=0.5,drift=0.2`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(String, f64)> = Vec::new();
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| LevyError::config(format!("expected key=value, got `{kv}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| LevyError::config(format!("`{v}` is not a number")))?;
            params.push((k.trim().to_ascii_lowercase(), v));
        }
        let mut take = |key: &str, default: Option<f64>| -> Result<f64> {
            match params.iter().position(|(k, _)| k == key) {
                Some(i) => Ok(params.remove(i).1),
                None => default.ok_or_else(|| {
                    LevyError::config(format!("model `{family}` requires parameter `{key}`"))
                }),
            }
        };
        let kind = match family.trim().to_ascii_lowercase().as_str() {
            "gamma" => ModelKind::Gamma {
                c: take("c", None)?,
                lambda: take("lambda", None)?,
            },
            "nig" => ModelKind::Nig {
                s: take("s", None)?,
                theta: take("theta", None)?,
                kappa: take("kappa", None)?,
            },
            "cpg" | "compound_poisson_gauss" => ModelKind::CompoundPoissonGauss {
                intensity: take("intensity", None)?,
                mean: take("mean", Some(0.0))?,
                sd: take("sd", None)?,
            },
            "brownian" | "brownian_only" => ModelKind::BrownianOnly,
            other => return Err(LevyError::config(format!("unknown model family `{other}`"))),
        };
        let sigma2 = take("sigma2", Some(0.0))?;
        let drift = take("drift", Some(0.0))?;
        if let Some((k, _)) = params.first() {
            return Err(LevyError::config(format!(
                "unknown parameter `{k}` for `{family}`"
            )));
        }
        let model = LevyModel {
            kind,
            sigma2,
            drift,
        };
        model.validate()?;
        Ok(model)
    }
}

/// Weight ρ that tames the singularity of ν at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ClipFunction {
    /// ρ(x) = min(1, x⁻²), so that x²ρ(x) = min(1, x²).
    #[default]
    MinOneInvX2,
    /// ρ(x) = 1 / (1 + x²).
    Rational,
}

impl ClipFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            ClipFunction::MinOneInvX2 => {
                let x2 = x * x;
                if x2 <= 1.0 {
                    1.0
                } else {
                    1.0 / x2
                }
            }
            ClipFunction::Rational => 1.0 / (1.0 + x * x),
        }
    }

    /// `ρ(x) x²`, the weight applied to a single increment.
    pub fn weight(self, x: f64) -> f64 {
        match self {
            ClipFunction::MinOneInvX2 => (x * x).min(1.0),
            ClipFunction::Rational => {
                let x2 = x * x;
                x2 / (1.0 + x2)
            }
        }
    }
}

impl fmt::Display for ClipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClipFunction::MinOneInvX2 => "min-one-inv-x2",
            ClipFunction::Rational => "rational",
        })
    }
}

impl FromStr for ClipFunction {
    type Err = LevyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min-one-inv-x2" | "min" | "minoneinvx2" => Ok(ClipFunction::MinOneInvX2),
            "rational" => Ok(ClipFunction::Rational),
            other => Err(LevyError::config(format!(
                "unknown clip function `{other}`"
            ))),
        }
    }
}
