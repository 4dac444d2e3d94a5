//! Exact simulation of increments `L_{kΔ} - L_{(k-1)Δ}`.
//!
//! Every replication draws from its own ChaCha8 stream, selected by
//! `(seed, stream)`, so a replication's data does not depend on which thread
//! produced it or in which order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, InverseGaussian, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LevyError, Result};
use crate::models::{LevyModel, ModelKind};

/// `n` increments observed at spacing `delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementSample {
    pub increments: Vec<f64>,
    pub delta: f64,
    /// Generating model, when the sample was simulated.
    pub model: Option<LevyModel>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

impl IncrementSample {
    /// Wraps observed increments.
    pub fn new(increments: Vec<f64>, delta: f64) -> Result<Self> {
        if increments.is_empty() {
            return Err(LevyError::config("a sample needs at least one increment"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(LevyError::config(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if let Some(bad) = increments.iter().find(|x| !x.is_finite()) {
            return Err(LevyError::config(format!("non-finite increment {bad}")));
        }
        Ok(IncrementSample {
            increments,
            delta,
            model: None,
            seed: None,
            stream: None,
        })
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Observation horizon `nΔ`.
    pub fn horizon(&self) -> f64 {
        self.len() as f64 * self.delta
    }

    /// Copy with every increment shifted by `-shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        out.increments.iter_mut().for_each(|x| *x -= shift);
        out
    }
}

/// RNG for replication `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-model sampler for increments over a fixed `delta`.
#[derive(Clone, Debug)]
pub struct IncrementSampler {
    model: LevyModel,
    delta: f64,
    law: JumpLaw,
}

#[derive(Clone, Debug)]
enum JumpLaw {
    Gamma(Gamma<f64>),
    Nig {
        subordinator: InverseGaussian<f64>,
        s: f64,
        theta: f64,
    },
    CompoundPoisson {
        count: Option<Poisson<f64>>,
        mean: f64,
        sd: f64,
    },
    None,
}

impl IncrementSampler {
    pub fn new(model: LevyModel, delta: f64) -> Result<Self> {
        model.validate()?;
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(LevyError::config(format!(
                "delta must be positive, got {delta}"
            )));
        }
        let bad = |e: &dyn std::fmt::Display| LevyError::config(format!("sampler setup: {e}"));
        let law = match model.kind {
            // shape cΔ, rate λ; rand_distr boosts shapes below one
            ModelKind::Gamma { c, lambda } => {
                JumpLaw::Gamma(Gamma::new(c * delta, 1.0 / lambda).map_err(|e| bad(&e))?)
            }
            // S ~ IG with E S = Δ and Var S = κΔ, i.e. shape Δ²/κ
            ModelKind::Nig { s, theta, kappa } => JumpLaw::Nig {
                subordinator: InverseGaussian::new(delta, delta * delta / kappa)
                    .map_err(|e| bad(&e))?,
                s,
                theta,
            },
            ModelKind::CompoundPoissonGauss {
                intensity,
                mean,
                sd,
            } => JumpLaw::CompoundPoisson {
                count: if intensity > 0.0 {
                    Some(Poisson::new(intensity * delta).map_err(|e| bad(&e))?)
                } else {
                    None
                },
                mean,
                sd,
            },
            ModelKind::BrownianOnly => JumpLaw::None,
        };
        Ok(IncrementSampler { model, delta, law })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let jump = match &self.law {
            JumpLaw::Gamma(g) => g.sample(rng),
            JumpLaw::Nig {
                subordinator,
                s,
                theta,
            } => {
                let time: f64 = subordinator.sample(rng);
                let z: f64 = rng.sample(StandardNormal);
                theta * time + s * time.sqrt() * z
            }
            JumpLaw::CompoundPoisson { count, mean, sd } => match count {
                Some(p) => {
                    let k = p.sample(rng) as u64;
                    (0..k)
                        .map(|_| mean + sd * rng.sample::<f64, _>(StandardNormal))
                        .sum()
                }
                None => 0.0,
            },
            JumpLaw::None => 0.0,
        };
        let diffusion = if self.model.sigma2 > 0.0 {
            (self.model.sigma2 * self.delta).sqrt() * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        jump + diffusion + self.model.drift * self.delta
    }
}

/// Draws `n` i.i.d. increments over `delta` from stream 0 of `seed`.
pub fn sample_increments(
    model: &LevyModel,
    n: usize,
    delta: f64,
    seed: u64,
) -> Result<IncrementSample> {
    sample_increments_stream(model, n, delta, seed, 0)
}

/// Draws `n` increments from replication stream `stream` of `seed`.
pub fn sample_increments_stream(
    model: &LevyModel,
    n: usize,
    delta: f64,
    seed: u64,
    stream: u64,
) -> Result<IncrementSample> {
    if n == 0 {
        return Err(LevyError::config("n must be at least 1"));
    }
    let sampler = IncrementSampler::new(*model, delta)?;
    let mut rng = stream_rng(seed, stream);
    let increments = (0..n).map(|_| sampler.sample(&mut rng)).collect();
    Ok(IncrementSample {
        increments,
        delta,
        model: Some(*model),
        seed: Some(seed),
        stream: Some(stream),
    })
}
