use proptest::prelude::*;

use levy_core::experiment::{coverage_outcomes, estimate_with_band, RepOutcome};
use levy_core::spectral::SpectralPipeline;
use levy_core::{
    ks_test, linspace, max_abs_brownian_cdf, max_abs_brownian_quantile, sample_increments_stream,
    ClipFunction, ExperimentConfig, LevyModel, Method, SpectralConfig, DEFAULT_TOL,
};

proptest! {
    #[test]
    fn quantile_cdf_round_trip(level in 0.01f64..0.99) {
        let q = max_abs_brownian_quantile(level).unwrap();
        prop_assert!((max_abs_brownian_cdf(q) - level).abs() < 1e-9);
    }

    #[test]
    fn quantile_is_strictly_monotone(a in 0.01f64..0.98, gap in 0.001f64..0.01) {
        prop_assert!(max_abs_brownian_quantile(a).unwrap() < max_abs_brownian_quantile(a + gap).unwrap());
    }
}

#[test]
fn test_rejects_exactly_when_band_misses_truth() {
    let model = LevyModel::gamma(30.0, 1.0);
    let grid = linspace(-3.0, 3.0, 256);
    let truth = model
        .true_n_curve(ClipFunction::MinOneInvX2, &grid, DEFAULT_TOL)
        .unwrap();
    let pipe = SpectralPipeline::new(SpectralConfig::default(), 0.01).unwrap();
    let mut rejections = 0;
    for r in 0..60u64 {
        let s = sample_increments_stream(&model, 2000, 0.01, 101, r).unwrap();
        for method in [Method::Direct, Method::Spectral] {
            let out = estimate_with_band(
                &s,
                method,
                ClipFunction::MinOneInvX2,
                &grid,
                Some(&pipe),
                0.1,
            )
            .unwrap();
            let lookup = |t: f64| truth[grid.partition_point(|&g| g < t)];
            let outcome = ks_test(&out.band, lookup);
            assert_eq!(outcome.reject, !out.band.contains(&truth));
            rejections += usize::from(outcome.reject);
        }
    }
    assert!(rejections > 0);
}

#[test]
fn coverage_is_independent_of_thread_count() {
    let cfg = ExperimentConfig {
        reps: 24,
        n: 500,
        ..Default::default()
    };
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(6)
        .build()
        .unwrap();
    let a = serial.install(|| coverage_outcomes(&cfg).unwrap());
    let b = parallel.install(|| coverage_outcomes(&cfg).unwrap());
    assert_eq!(a, b);
    assert!(a.iter().flatten().all(|o| *o != RepOutcome::Failed));
}
