/// Fourier transform of the flat-top kernel at scaled frequency `v = hu`.
///
/// Equal to one on `|v| <= c_flat`, zero on `|v| >= 1`, joined by the quintic
/// smoothstep `1 - s³(10 - 15s + 6s²)`, which is C² at both ends. Because the
/// transform is constant near the origin every moment of the kernel vanishes.
pub fn flat_top_kernel_ft(v: f64, c_flat: f64) -> f64 {
    debug_assert!(c_flat > 0.0 && c_flat < 1.0);
    let a = v.abs();
    if a <= c_flat {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        let s = (a - c_flat) / (1.0 - c_flat);
        1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        for c in [0.2, 0.5, 0.8] {
            assert_eq!(flat_top_kernel_ft(0.0, c), 1.0);
            assert_eq!(flat_top_kernel_ft(c, c), 1.0);
            assert_eq!(flat_top_kernel_ft(1.0, c), 0.0);
            assert_eq!(flat_top_kernel_ft(-1.3, c), 0.0);
        }
    }

    #[test]
    fn even_and_bounded() {
        for k in 0..=200 {
            let v = -1.2 + 0.012 * k as f64;
            let f = flat_top_kernel_ft(v, 0.5);
            assert_eq!(f, flat_top_kernel_ft(-v, 0.5));
            assert!((0.0..=1.0).contains(&f));
        }
    }

    #[test]
    fn derivatives_vanish_at_origin() {
        // central differences of order 1..4 with step 1e-3
        let h = 1e-3;
        let f = |v: f64| flat_top_kernel_ft(v, 0.5);
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let d3 = (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
        let d4 = (f(2.0 * h) - 4.0 * f(h) + 6.0 * f(0.0) - 4.0 * f(-h) + f(-2.0 * h)) / h.powi(4);
        for d in [d1, d2, d3, d4] {
            assert!(d.abs() <= 1e-10);
        }
    }

    #[test]
    fn taper_is_c2() {
        let f = |v: f64| flat_top_kernel_ft(v, 0.5);
        let h = 1e-5;
        for knot in [0.5, 1.0] {
            let left = (f(knot) - f(knot - h)) / h;
            let right = (f(knot + h) - f(knot)) / h;
            assert!((left - right).abs() < 1e-6);
            let curv_l = (f(knot) - 2.0 * f(knot - h) + f(knot - 2.0 * h)) / (h * h);
            let curv_r = (f(knot + 2.0 * h) - 2.0 * f(knot + h) + f(knot)) / (h * h);
            assert!((curv_l - curv_r).abs() < 1e-2);
        }
    }
}
