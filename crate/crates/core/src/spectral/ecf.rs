//! Empirical characteristic function and the second derivative of the
//! characteristic exponent.

use num_complex::Complex64;

use crate::error::{LevyError, Result};

/// `φ`, `φ'`, `φ''` sampled on a frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CfValues {
    pub phi: Vec<Complex64>,
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
}

impl CfValues {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }
}

/// `φ(u) = n⁻¹ Σ e^{iuX_k}` together with `φ'(u) = n⁻¹ Σ iX_k e^{iuX_k}` and
/// `φ''(u) = -n⁻¹ Σ X_k² e^{iuX_k}` at arbitrary frequencies.
pub fn ecf_with_derivatives(xs: &[f64], u_grid: &[f64]) -> CfValues {
    let n = xs.len() as f64;
    let mut out = CfValues {
        phi: Vec::with_capacity(u_grid.len()),
        d1: Vec::with_capacity(u_grid.len()),
        d2: Vec::with_capacity(u_grid.len()),
    };
    for &u in u_grid {
        let (mut s0, mut s1, mut s2) = (
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
        );
        for &x in xs {
            let (sin, cos) = (u * x).sin_cos();
            let e = Complex64::new(cos, sin);
            s0 += e;
            s1 += x * e;
            s2 += x * x * e;
        }
        out.phi.push(s0 / n);
        out.d1.push(Complex64::i() * s1 / n);
        out.d2.push(-s2 / n);
    }
    out
}

/// Steps between exact re-evaluations of the phasor recurrence.
const REANCHOR: usize = 64;

/// Same as [`ecf_with_derivatives`] on the symmetric grid
/// `u_j = -U + j·2U/(P-1)`, `P` even.
///
/// Only the positive half is accumulated; the negative half follows from
/// `φ(-u) = conj φ(u)`. Successive phasors `e^{iu_jX}` are produced by
/// complex multiplication and re-anchored with an exact `sin_cos` every few
/// dozen steps.
pub fn ecf_symmetric_grid(xs: &[f64], u_max: f64, points: usize) -> CfValues {
    assert!(
        points >= 2 && points.is_multiple_of(2),
        "symmetric grid needs an even number of points"
    );
    let half = points / 2;
    let du = 2.0 * u_max / (points - 1) as f64;
    let u_first = 0.5 * du;
    let mut s0 = vec![Complex64::default(); half];
    let mut s1 = vec![Complex64::default(); half];
    let mut s2 = vec![Complex64::default(); half];
    for &x in xs {
        let x2 = x * x;
        let step = Complex64::from_polar(1.0, du * x);
        let mut e = Complex64::default();
        for j in 0..half {
            if j % REANCHOR == 0 {
                let u = u_first + j as f64 * du;
                e = Complex64::from_polar(1.0, u * x);
            } else {
                e *= step;
            }
            s0[j] += e;
            s1[j] += x * e;
            s2[j] += x2 * e;
        }
    }
    let n = xs.len() as f64;
    let i = Complex64::i();
    let pos_phi: Vec<Complex64> = s0.iter().map(|s| s / n).collect();
    let pos_d1: Vec<Complex64> = s1.iter().map(|s| i * s / n).collect();
    let pos_d2: Vec<Complex64> = s2.iter().map(|s| -s / n).collect();
    // φ and φ'' are Hermitian, φ' is anti-Hermitian
    let mirror = |pos: &[Complex64], sign: f64| -> Vec<Complex64> {
        pos.iter()
            .rev()
            .map(|z| sign * z.conj())
            .chain(pos.iter().copied())
            .collect()
    };
    CfValues {
        phi: mirror(&pos_phi, 1.0),
        d1: mirror(&pos_d1, -1.0),
        d2: mirror(&pos_d2, 1.0),
    }
}

/// Plug-in estimate of ψ'' together with the number of guarded frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiDd {
    pub values: Vec<Complex64>,
    pub guarded: usize,
}

/// `ψ''(u) = (φ''φ - φ'²) / (Δ φ²)`, with `|φ|` floored at `cf_floor`
/// (direction preserved). Fails if every frequency had to be floored.
pub fn psi_dd_hat(cf: &CfValues, delta: f64, cf_floor: f64) -> Result<PsiDd> {
    if cf.phi.len() != cf.d1.len() || cf.phi.len() != cf.d2.len() {
        return Err(LevyError::config(
            "characteristic function arrays are misaligned",
        ));
    }
    if !(delta > 0.0) || !(cf_floor > 0.0) {
        return Err(LevyError::config("delta and cf_floor must be positive"));
    }
    let mut guarded = 0;
    let values: Vec<Complex64> = cf
        .phi
        .iter()
        .zip(&cf.d1)
        .zip(&cf.d2)
        .map(|((&phi, &d1), &d2)| {
            let modulus = phi.norm();
            let phi = if modulus < cf_floor {
                guarded += 1;
                if modulus > 0.0 {
                    phi * (cf_floor / modulus)
                } else {
                    Complex64::new(cf_floor, 0.0)
                }
            } else {
                phi
            };
            (d2 * phi - d1 * d1) / (delta * phi * phi)
        })
        .collect();
    if !values.is_empty() && guarded == values.len() {
        return Err(LevyError::EstimationFailure(
            "empirical characteristic function below the floor at every frequency; \
             delta is too large or n too small"
                .into(),
        ));
    }
    Ok(PsiDd { values, guarded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn symmetric_sample_at_pi() {
        let cf = ecf_with_derivatives(&[1.0, -1.0], &[PI]);
        assert!((cf.phi[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(cf.d1[0].norm() < 1e-15);
    }

    #[test]
    fn values_at_zero_frequency() {
        let xs = [0.3, -1.2, 2.0, 0.1];
        let cf = ecf_with_derivatives(&xs, &[0.0]);
        let mean = xs.iter().sum::<f64>() / 4.0;
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / 4.0;
        assert_eq!(cf.phi[0], Complex64::new(1.0, 0.0));
        assert!((cf.d1[0] - Complex64::new(0.0, mean)).norm() < 1e-15);
        assert!((cf.d2[0] - Complex64::new(-m2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_grid_agrees_with_direct_evaluation() {
        let xs: Vec<f64> = (0..300)
            .map(|k| ((k * 7919) % 1000) as f64 / 250.0 - 2.0)
            .collect();
        let points = 512;
        let u_max = 25.0;
        let fast = ecf_symmetric_grid(&xs, u_max, points);
        let u: Vec<f64> = (0..points)
            .map(|j| -u_max + 2.0 * u_max * j as f64 / (points - 1) as f64)
            .collect();
        let slow = ecf_with_derivatives(&xs, &u);
        for (a, b) in [
            (&fast.phi, &slow.phi),
            (&fast.d1, &slow.d1),
            (&fast.d2, &slow.d2),
        ] {
            let err = a
                .iter()
                .zip(b.iter())
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "{err}");
        }
    }

    #[test]
    fn gaussian_psi_dd_is_minus_sigma2() {
        let delta = 0.01;
        let u: Vec<f64> = (0..101).map(|k| -20.0 + 0.4 * k as f64).collect();
        let mut cf = CfValues {
            phi: vec![],
            d1: vec![],
            d2: vec![],
        };
        for &v in &u {
            let phi = Complex64::new((-delta * v * v / 2.0).exp(), 0.0);
            cf.phi.push(phi);
            cf.d1.push(-delta * v * phi);
            cf.d2.push((delta * delta * v * v - delta) * phi);
        }
        let psi = psi_dd_hat(&cf, delta, 1e-12).unwrap();
        assert_eq!(psi.guarded, 0);
        for z in psi.values {
            assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_psi_dd_closed_form() {
        let (c, lambda, delta) = (30.0, 1.0, 0.01);
        let u: Vec<f64> = (0..201).map(|k| -10.0 + 0.1 * k as f64).collect();
        let mut cf = CfValues {
            phi: vec![],
            d1: vec![],
            d2: vec![],
        };
        let a = c * delta;
        for &v in &u {
            // φ = (1 - iu/λ)^{-a}
            let w = Complex64::new(1.0, -v / lambda);
            let i_l = Complex64::new(0.0, 1.0 / lambda);
            cf.phi.push(w.powf(-a));
            cf.d1.push(a * i_l * w.powf(-a - 1.0));
            cf.d2.push(a * (a + 1.0) * i_l * i_l * w.powf(-a - 2.0));
        }
        let psi = psi_dd_hat(&cf, delta, 1e-12).unwrap();
        for (&v, z) in u.iter().zip(&psi.values) {
            let want = -c / (Complex64::new(lambda, -v) * Complex64::new(lambda, -v));
            assert!((z - want).norm() < 1e-10);
        }
    }

    #[test]
    fn floor_guard_and_failure() {
        let cf = CfValues {
            phi: vec![Complex64::new(0.0, 1e-14), Complex64::new(0.5, 0.0)],
            d1: vec![Complex64::default(); 2],
            d2: vec![Complex64::default(); 2],
        };
        let psi = psi_dd_hat(&cf, 0.1, 1e-12).unwrap();
        assert_eq!(psi.guarded, 1);
        let all_bad = CfValues {
            phi: vec![Complex64::default(); 3],
            d1: vec![Complex64::default(); 3],
            d2: vec![Complex64::default(); 3],
        };
        assert!(matches!(
            psi_dd_hat(&all_bad, 0.1, 1e-12),
            Err(LevyError::EstimationFailure(_))
        ));
    }
}
