use serde::{Deserialize, Serialize};

use crate::error::{LevyError, Result};
use crate::models::ClipFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Spectral,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Spectral => "spectral",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = LevyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(Method::Direct),
            "spectral" => Ok(Method::Spectral),
            other => Err(LevyError::config(format!("unknown method `{other}`"))),
        }
    }
}

/// Which jump-measure functional a curve estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// `N_ρ(t) = ∫_{-∞}^t ρ x² dν`
    #[serde(rename = "N")]
    N,
    /// Tail function, defined away from the origin.
    #[serde(rename = "calN")]
    CalN,
}

/// An estimated function sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
    pub target: Target,
    pub n: usize,
    pub delta: f64,
    pub clip: Option<ClipFunction>,
}

impl EstimateCurve {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.n as f64 * self.delta
    }

    /// `sup_t |self(t) - other(t)|` over the shared grid.
    pub fn sup_distance(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks that `grid` is nonempty and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(LevyError::config("evaluation grid is empty"));
    }
    if grid.iter().any(|t| t.is_nan()) {
        return Err(LevyError::config("evaluation grid contains NaN"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LevyError::config(
            "evaluation grid must be strictly increasing",
        ));
    }
    Ok(())
}

/// `points` equispaced values covering `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k + 1 == points {
                        hi
                    } else {
                        lo + step * k as f64
                    }
                })
                .collect()
        }
    }
}
