//! Special functions needed by the model layer.

/// Exponentially scaled modified Bessel function of the second kind,
/// `exp(x) * K_1(x)`, for `x > 0`.
///
/// Evaluates `∫_0^∞ exp(-x (cosh t - 1)) cosh t dt` with the trapezoidal
/// rule. The integrand is analytic in a strip of half-width π/2 around the
/// real axis; the step shrinks like `x^{-1/2}` with the width of the peak,
/// which keeps the discretisation error far below double precision.
pub fn bessel_k1_scaled(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let step = (0.5 / x.sqrt()).min(0.1);
    let mut sum = 0.5; // t = 0 term, half weight
    let mut t = step;
    loop {
        let ch = t.cosh();
        let term = (-x * (ch - 1.0)).exp() * ch;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        t += step;
    }
    sum * step
}

/// Modified Bessel function of the second kind of order one.
pub fn bessel_k1(x: f64) -> f64 {
    bessel_k1_scaled(x) * (-x).exp()
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
