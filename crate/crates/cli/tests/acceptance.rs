//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use levy_core::experiment::{run_bias_sweep, run_coverage};
use levy_core::spectral::{psi_dd_hat, SpectralPipeline};
use levy_core::{
    linspace, max_abs_brownian_cdf, max_abs_brownian_quantile, sample_increments,
    sample_increments_stream, ClipFunction, CoverageReport, ExperimentConfig, GridSpec, LevyModel,
    Method, SpectralConfig,
};

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn report(method: Method, reports: &[CoverageReport]) -> &CoverageReport {
    reports
        .iter()
        .find(|r| r.method == method)
        .expect("method present")
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn coverage_criteria(out: &mut Vec<Outcome>) {
    let gamma = run_coverage(&ExperimentConfig::default()).expect("gamma coverage");
    let (d, s) = (
        report(Method::Direct, &gamma),
        report(Method::Spectral, &gamma),
    );
    out.push(Outcome {
        name: "coverage gamma/spectral in [0.80, 0.92]",
        pass: within(s.coverage, 0.80, 0.92) && s.reps == 500,
        detail: format!(
            "coverage {:.3} ± {:.3}, failures {}",
            s.coverage, s.mc_stderr, s.failures
        ),
    });
    out.push(Outcome {
        name: "coverage gamma/direct in [0.50, 0.68] and below spectral",
        pass: within(d.coverage, 0.50, 0.68) && d.coverage < s.coverage,
        detail: format!("direct {:.3} vs spectral {:.3}", d.coverage, s.coverage),
    });
    let nig_cfg = ExperimentConfig {
        model: LevyModel::nig(1.5, 0.1, 0.5),
        ..Default::default()
    };
    let nig = run_coverage(&nig_cfg).expect("nig coverage");
    let (nd, ns) = (report(Method::Direct, &nig), report(Method::Spectral, &nig));
    out.push(Outcome {
        name: "coverage nig/both in [0.86, 0.97]",
        pass: within(nd.coverage, 0.86, 0.97) && within(ns.coverage, 0.86, 0.97),
        detail: format!("direct {:.3}, spectral {:.3}", nd.coverage, ns.coverage),
    });
}

fn bias_criterion(out: &mut Vec<Outcome>) {
    let cfg = ExperimentConfig {
        methods: vec![Method::Direct],
        reps: 100,
        deltas: vec![0.01, 0.001],
        horizon: Some(20.0),
        probe_t: Some(3.0),
        grid: GridSpec::Fixed {
            lo: -3.0,
            hi: 3.0,
            points: 512,
        },
        ..Default::default()
    };
    let rows = run_bias_sweep(&cfg).expect("bias sweep");
    let (coarse, fine) = (&rows[0], &rows[1]);
    let signed = coarse.mean_signed_error_at_probe.expect("probe");
    out.push(Outcome {
        name: "bias gamma/direct: overestimation at t=3, sup-bias halves from 0.01 to 0.001",
        pass: signed > 0.0 && fine.sup_bias <= 0.5 * coarse.sup_bias,
        detail: format!(
            "signed error at 3: {signed:.4}; sup-bias {:.4} -> {:.4} (ratio {:.3})",
            coarse.sup_bias,
            fine.sup_bias,
            fine.sup_bias / coarse.sup_bias
        ),
    });
}

fn oracle_criterion(out: &mut Vec<Outcome>) {
    let (c, lambda, delta) = (30.0, 1.0, 0.01);
    let model = LevyModel::gamma(c, lambda);
    let pipe = SpectralPipeline::new(
        SpectralConfig {
            h: Some(0.05),
            ..Default::default()
        },
        delta,
    )
    .unwrap();
    let cf = pipe.model_cf(&model);
    let psi = psi_dd_hat(&cf, delta, 1e-12).unwrap();
    let psi_err = pipe
        .frequency_grid()
        .iter()
        .zip(&psi.values)
        .map(|(&u, z)| {
            let w = Complex64::new(lambda, -u);
            (z + c / (w * w)).norm()
        })
        .fold(0.0, f64::max);
    let density = pipe.density_from_cf(&cf, 0.0).unwrap();
    let n1 = density
        .n_curve(ClipFunction::MinOneInvX2, &[1.0], 1)
        .unwrap()
        .values[0];
    let want = 30.0 * (1.0 - 2.0 * (-1.0f64).exp());
    out.push(Outcome {
        name: "oracle gamma: psi'' to 1e-10, N(1) within 2e-2 at h=0.05",
        pass: psi_err <= 1e-10 && (n1 - want).abs() <= 2e-2,
        detail: format!("max psi'' error {psi_err:.2e}; N(1) = {n1:.5} vs {want:.5}"),
    });
}

fn drift_criterion(out: &mut Vec<Outcome>) {
    let delta = 0.01;
    let pipe = SpectralPipeline::new(SpectralConfig::default(), delta).unwrap();
    let grid = linspace(-3.0, 3.0, 512);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for r in 0..100 {
        let gamma_shift: f64 = rng.random_range(-5.0..=5.0);
        let sample = sample_increments_stream(&LevyModel::gamma(30.0, 1.0), 2000, delta, 11, r)
            .expect("sample");
        let moved = sample.shifted(-gamma_shift * delta);
        let a = pipe
            .density(&sample)
            .unwrap()
            .n_curve(ClipFunction::MinOneInvX2, &grid, sample.len())
            .unwrap();
        let b = pipe
            .density(&moved)
            .unwrap()
            .n_curve(ClipFunction::MinOneInvX2, &grid, moved.len())
            .unwrap();
        let scale = a.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(a.sup_distance(&b.values) / scale);
    }
    out.push(Outcome {
        name: "drift invariance of spectral N over 100 samples to 1e-9",
        pass: worst <= 1e-9,
        detail: format!("worst relative difference {worst:.2e}"),
    });
}

/// Expected overshoot of the continuous maximum over a Gaussian walk,
/// `-ζ(1/2)/sqrt(2π)` per unit of `sqrt(dt)`.
const WALK_CORRECTION: f64 = 0.582_597_157_939_010_7;

fn quantile_criterion(out: &mut Vec<Outcome>) {
    let (paths, steps) = (1_000_000usize, 10_000usize);
    let chunk = 1000;
    let sd = (1.0 / steps as f64).sqrt();
    let mut maxima: Vec<f64> = (0..(paths / chunk) as u64)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            rng.set_stream(c);
            (0..chunk)
                .map(|_| {
                    let (mut b, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
                    for _ in 0..steps {
                        let z: f64 = rng.sample(StandardNormal);
                        b += sd * z;
                        hi = hi.max(b);
                        lo = lo.min(b);
                    }
                    hi.max(-lo) + WALK_CORRECTION * sd
                })
                .collect::<Vec<_>>()
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    let n = maxima.len() as f64;
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0.5, 0.9, 0.95, 0.99] {
        let q = max_abs_brownian_quantile(p).unwrap();
        let k = (p * n).ceil() as usize - 1;
        let spread = (n * p * (1.0 - p)).sqrt().ceil() as usize;
        let se = 0.5 * (maxima[k + spread] - maxima[k - spread]);
        let z = (maxima[k] - q) / se;
        ok &= z.abs() <= 3.0;
        parts.push(format!("{p}: q={q:.5} sim={:.5} z={z:+.2}", maxima[k]));
    }
    let mut round_trip: f64 = 0.0;
    for p in [0.01, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999] {
        round_trip =
            round_trip.max((max_abs_brownian_cdf(max_abs_brownian_quantile(p).unwrap()) - p).abs());
    }
    for k in 1..=40 {
        let a = 0.1 * k as f64;
        round_trip =
            round_trip.max((max_abs_brownian_quantile(max_abs_brownian_cdf(a)).unwrap() - a).abs());
    }
    out.push(Outcome {
        name: "max|B| quantile vs simulation within 3 SE, round trip to 1e-9",
        pass: ok && round_trip <= 1e-9,
        detail: format!("{}; round trip {round_trip:.1e}", parts.join("; ")),
    });
}

fn moment_criterion(out: &mut Vec<Outcome>) {
    let delta = 1e-3;
    let s = sample_increments(&LevyModel::gamma(30.0, 1.0), 1_000_000, delta, 5).unwrap();
    let m = s.increments.iter().map(|x| x * x).sum::<f64>() / s.len() as f64 / delta;
    out.push(Outcome {
        name: "moment diagnostic: mean(X^2)/delta within 5% of 30",
        pass: (m / 30.0 - 1.0).abs() <= 0.05,
        detail: format!("{m:.4}"),
    });
}

fn run_cli(threads: usize, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_levy-lab"))
        .env("LEVY_LAB_THREADS", threads.to_string())
        .args(args)
        .status()
        .expect("spawn levy-lab");
    assert!(status.success(), "levy-lab {args:?} failed");
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism_criterion(out: &mut Vec<Outcome>) {
    let root = tempfile::tempdir().unwrap();
    let config = root.path().join("config.json");
    let cfg = ExperimentConfig {
        model: LevyModel::nig(1.5, 0.1, 0.5),
        reps: 40,
        figure_curves: 10,
        ..Default::default()
    };
    std::fs::write(&config, cfg.to_json()).unwrap();
    let cfg_arg = config.to_str().unwrap();
    let mut runs = Vec::new();
    for (label, threads) in [("a", 1), ("b", 8), ("c", 8)] {
        let dir = root.path().join(label);
        std::fs::create_dir_all(&dir).unwrap();
        let d = dir.to_str().unwrap();
        run_cli(
            threads,
            &[
                "coverage",
                "--config",
                cfg_arg,
                "--out",
                &format!("{d}/coverage.json"),
            ],
        );
        run_cli(
            threads,
            &["figure", "--config", cfg_arg, "--out-dir", d, "--svg"],
        );
        run_cli(
            threads,
            &[
                "bias-sweep",
                "--config",
                cfg_arg,
                "--reps",
                "5",
                "--deltas",
                "0.01,0.005",
                "--horizon",
                "20",
                "--probe-t",
                "1",
                "--out",
                &format!("{d}/sweep.csv"),
            ],
        );
        runs.push(dir_bytes(&dir));
    }
    let files = runs[0].len();
    out.push(Outcome {
        name: "determinism: byte-identical outputs at 1 and 8 threads and on re-run",
        pass: files >= 6 && runs[0] == runs[1] && runs[1] == runs[2],
        detail: format!("{files} files compared across 3 runs"),
    });
}

type Criterion = fn(&mut Vec<Outcome>);

fn main() {
    let mut outcomes = Vec::new();
    let steps: [(&str, Criterion); 7] = [
        ("coverage", coverage_criteria),
        ("bias", bias_criterion),
        ("oracle", oracle_criterion),
        ("drift", drift_criterion),
        ("quantile", quantile_criterion),
        ("moment", moment_criterion),
        ("determinism", determinism_criterion),
    ];
    for (label, step) in steps {
        let start = Instant::now();
        step(&mut outcomes);
        eprintln!(
            "  ({label} finished in {:.1}s)",
            start.elapsed().as_secs_f64()
        );
    }
    let mut failed = 0;
    for o in &outcomes {
        println!(
            "{} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
