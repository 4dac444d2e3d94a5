//! Nonparametric estimation of the generalized distribution function of a
//! Lévy measure from discretely observed increments, with uniform
//! confidence bands.
//!
//! Two estimators of `N(t) = ∫_{(-∞,t]} ρ(x) x² ν(dx)` are provided: a
//! direct one, summing clipped squared increments, and a spectral one,
//! inverting the second derivative of the empirical characteristic
//! exponent. Both come with Kolmogorov–Smirnov-type bands.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod direct;
pub mod error;
pub mod experiment;
pub mod inference;
pub mod io;
pub mod models;
pub mod quadrature;
pub mod simulate;
pub mod special;
pub mod spectral;

pub use curve::{linspace, EstimateCurve, Method, Target};
pub use direct::{direct_band_scale, direct_cal_n, direct_n};
pub use error::{LevyError, Result};
pub use experiment::{ExperimentConfig, GridSpec};
pub use inference::{
    confidence_band, ks_test, max_abs_brownian_cdf, max_abs_brownian_quantile, BandResult,
    CoverageReport, TestOutcome,
};
pub use models::{ClipFunction, LevyModel, ModelKind, DEFAULT_TOL};
pub use simulate::{sample_increments, sample_increments_stream, IncrementSample};
pub use spectral::{SigmaMode, SpectralConfig, SpectralDiagnostics, SpectralPipeline};
