//! Trapezoidal inverse Fourier transform between two equispaced grids.
//!
//! Computes `f(x_m) = (1/2π) Σ_j w_j G(u_j) e^{-i u_j x_m} du` for a
//! frequency grid `u_j = u_0 + j du` and a spatial grid `x_m = x_0 + m dx`.
//! The spacings are unrelated, so the sum is evaluated as a chirp-z
//! transform (Bluestein's identity `jm = (j² + m² - (m-j)²)/2`) on top of
//! power-of-two FFTs.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Precomputed chirps and FFT plans for one pair of grids.
#[derive(Clone)]
pub struct InverseFourierPlan {
    u0: f64,
    du: f64,
    x0: f64,
    dx: f64,
    n_in: usize,
    n_out: usize,
    len: usize,
    /// `e^{-i j du x0} · e^{-iθ j²/2}`, premultiplying the input.
    pre: Vec<Complex64>,
    /// FFT of the conjugate chirp, padded to `len`.
    kernel_fft: Vec<Complex64>,
    /// `e^{-iθ m²/2} · e^{-i u0 x_m} · du/2π`.
    post: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for InverseFourierPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InverseFourierPlan")
            .field("n_in", &self.n_in)
            .field("n_out", &self.n_out)
            .field("len", &self.len)
            .finish()
    }
}

impl InverseFourierPlan {
    pub fn new(u0: f64, du: f64, n_in: usize, x0: f64, dx: f64, n_out: usize) -> Self {
        assert!(n_in > 0 && n_out > 0);
        let theta = du * dx;
        let len = (n_in + n_out - 1).next_power_of_two();
        let chirp = |k: usize| {
            let k = k as f64;
            Complex64::from_polar(1.0, -0.5 * theta * k * k)
        };
        let pre = (0..n_in)
            .map(|j| Complex64::from_polar(1.0, -(j as f64) * du * x0) * chirp(j))
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for (k, slot) in kernel.iter_mut().enumerate().take(n_out) {
            *slot = chirp(k).conj();
        }
        for k in 1..n_in {
            kernel[len - k] = chirp(k).conj();
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        forward.process(&mut kernel);
        let scale = du / (2.0 * PI) / len as f64;
        let post = (0..n_out)
            .map(|m| {
                let x = x0 + m as f64 * dx;
                chirp(m) * Complex64::from_polar(scale, -u0 * x)
            })
            .collect();
        InverseFourierPlan {
            u0,
            du,
            x0,
            dx,
            n_in,
            n_out,
            len,
            pre,
            kernel_fft: kernel,
            post,
            forward,
            inverse,
        }
    }

    pub fn input_len(&self) -> usize {
        self.n_in
    }

    pub fn output_len(&self) -> usize {
        self.n_out
    }

    pub fn spatial_grid(&self) -> Vec<f64> {
        (0..self.n_out)
            .map(|m| self.x0 + m as f64 * self.dx)
            .collect()
    }

    pub fn frequency_grid(&self) -> Vec<f64> {
        (0..self.n_in)
            .map(|j| self.u0 + j as f64 * self.du)
            .collect()
    }

    /// Applies the transform to already weighted samples `w_j G(u_j)`.
    pub fn apply(&self, weighted: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(weighted.len(), self.n_in);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for ((b, &g), &p) in buf.iter_mut().zip(weighted).zip(&self.pre) {
            *b = g * p;
        }
        self.forward.process(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.kernel_fft) {
            *b *= k;
        }
        self.inverse.process(&mut buf);
        buf.iter().zip(&self.post).map(|(&b, &p)| b * p).collect()
    }
}
