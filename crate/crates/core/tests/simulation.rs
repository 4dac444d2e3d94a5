use levy_core::spectral::ecf_with_derivatives;
use levy_core::{sample_increments, sample_increments_stream, LevyModel};

/// Two-sample Kolmogorov–Smirnov statistic.
fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn pairs_match_double_interval(model: LevyModel, delta: f64) {
    let n = 100_000;
    let fine = sample_increments_stream(&model, 2 * n, delta, 17, 0).unwrap();
    let sums: Vec<f64> = fine.increments.chunks(2).map(|p| p[0] + p[1]).collect();
    let coarse = sample_increments_stream(&model, n, 2.0 * delta, 17, 1).unwrap();
    let d = ks_two_sample(sums, coarse.increments);
    // 5% critical value of the two-sample statistic with equal sizes
    let critical = 1.358 * (2.0 / n as f64).sqrt();
    assert!(d < critical, "{model}: D = {d}, critical {critical}");
}

#[test]
fn gamma_increments_are_infinitely_divisible() {
    pairs_match_double_interval(LevyModel::gamma(30.0, 1.0), 0.01);
}

#[test]
fn nig_increments_are_infinitely_divisible() {
    pairs_match_double_interval(LevyModel::nig(1.5, 0.1, 0.5), 0.01);
}

#[test]
fn compound_poisson_increments_are_infinitely_divisible() {
    pairs_match_double_interval(
        LevyModel::compound_poisson_gauss(20.0, 0.3, 0.5).with_sigma2(0.2),
        0.01,
    );
}

#[test]
fn scaled_second_moment_approaches_total_x2_mass() {
    let delta = 1e-3;
    for model in [LevyModel::gamma(30.0, 1.0), LevyModel::nig(1.5, 0.1, 0.5)] {
        let s = sample_increments(&model, 1_000_000, delta, 3).unwrap();
        let m = s.increments.iter().map(|x| x * x).sum::<f64>() / s.len() as f64 / delta;
        let limit = model.sigma2 + model.second_moment_nu();
        assert!((m / limit - 1.0).abs() < 0.05, "{model}: {m} vs {limit}");
    }
}

#[test]
fn brownian_ecf_matches_gaussian_cf() {
    let n = 1_000_000;
    let s = sample_increments(&LevyModel::brownian(1.0), n, 0.01, 8).unwrap();
    let cf = ecf_with_derivatives(&s.increments, &[5.0]);
    let want = (-0.01f64 * 25.0 / 2.0).exp();
    assert!(
        (cf.phi[0].re - want).abs() < 4.0 / (n as f64).sqrt(),
        "{} vs {want}",
        cf.phi[0]
    );
    assert!(cf.phi[0].im.abs() < 4.0 / (n as f64).sqrt());
}

#[test]
fn drift_shifts_the_sample_mean() {
    let model = LevyModel::gamma(30.0, 1.0).with_drift(-2.0);
    let s = sample_increments(&model, 200_000, 0.01, 4).unwrap();
    let mean = s.increments.iter().sum::<f64>() / s.len() as f64;
    let want = model.mean_per_unit_time() * 0.01;
    let se = (0.3f64 / s.len() as f64).sqrt();
    assert!((mean - want).abs() < 4.0 * se, "{mean} vs {want}");
}
