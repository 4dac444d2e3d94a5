//! `levy-lab`: estimation of Lévy jump measures from increments, bands,
//! tests and Monte-Carlo experiments.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when estimation
//! fails, 1 for anything else (I/O).

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use levy_core::experiment::{
    estimate_with_band, figure_range, oracle_smoothing_bias, run_bias_sweep, run_coverage,
    run_figure, MethodOutput,
};
use levy_core::io::{
    fmt_f64, read_increments, write_csv_columns, write_csv_rows, write_increments, write_json,
};
use levy_core::spectral::{SpectralDensity, SpectralPipeline};
use levy_core::{
    direct_cal_n, direct_n, ks_test, linspace, max_abs_brownian_cdf, max_abs_brownian_quantile,
    sample_increments_stream, ClipFunction, EstimateCurve, ExperimentConfig, GridSpec,
    IncrementSample, LevyError, LevyModel, Method, SigmaMode, SpectralConfig, SpectralDiagnostics,
};

#[derive(Parser, Debug)]
#[command(
    name = "levy-lab",
    version,
    about = "Nonparametric estimation of Lévy jump measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate increments of a model as CSV `k,x`.
    Simulate(SimulateArgs),
    /// Tabulate the exact `N(t)` of a model as CSV `t,N_true`.
    Truth(TruthArgs),
    /// Estimate `N` or the tail function as CSV `t,value`.
    Estimate(EstimateArgs),
    /// Estimate with a uniform confidence band as CSV `t,lower,estimate,upper`.
    Band(BandArgs),
    /// Test whether a model's `N` lies inside the band; JSON output.
    Test(TestArgs),
    /// Monte-Carlo coverage of the bands.
    Coverage(ExperimentArgs),
    /// Overlay of estimator curves with the truth and one band.
    Figure(FigureArgs),
    /// Bias of the estimators as a function of the sampling interval.
    BiasSweep(SweepArgs),
    /// Quantiles of `max_{[0,1]} |B|`.
    Quantile(QuantileArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, default_value = "gamma:c=30,lambda=1")]
    model: LevyModel,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

impl GridArgs {
    /// Fixed grid if both ends are given, otherwise an auto grid.
    fn spec(&self, base: GridSpec) -> Result<GridSpec> {
        let points = self.points.unwrap_or(base.points());
        Ok(match (self.t_min, self.t_max) {
            (Some(lo), Some(hi)) => GridSpec::Fixed { lo, hi, points },
            (None, None) => match base {
                GridSpec::Fixed { lo, hi, .. } => GridSpec::Fixed { lo, hi, points },
                GridSpec::Auto { .. } => GridSpec::Auto { points },
            },
            _ => {
                return Err(LevyError::config("--t-min and --t-max must be given together").into())
            }
        })
    }
}

#[derive(Args, Debug)]
struct TruthArgs {
    #[arg(long, default_value = "gamma:c=30,lambda=1")]
    model: LevyModel,
    #[arg(long, default_value = "min-one-inv-x2")]
    clip: ClipFunction,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[arg(long, default_value_t = levy_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SpectralArgs {
    /// Bandwidth; defaults to sqrt(delta).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    c_flat: Option<f64>,
    #[arg(long)]
    x_range: Option<f64>,
    #[arg(long)]
    x_points: Option<usize>,
    #[arg(long)]
    u_points: Option<usize>,
    #[arg(long)]
    cf_floor: Option<f64>,
    /// `zero`, `estimate` or `known:<value>`.
    #[arg(long)]
    sigma: Option<SigmaMode>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    sigma_max: Option<f64>,
}

impl SpectralArgs {
    fn apply(&self, mut cfg: SpectralConfig) -> SpectralConfig {
        if self.h.is_some() {
            cfg.h = self.h;
        }
        if let Some(v) = self.c_flat {
            cfg.c_flat = v;
        }
        if let Some(v) = self.x_range {
            cfg.x_range = v;
        }
        if let Some(v) = self.x_points {
            cfg.x_points = v;
        }
        if let Some(v) = self.u_points {
            cfg.u_points = v;
        }
        if let Some(v) = self.cf_floor {
            cfg.cf_floor = v;
        }
        if let Some(mode) = self.sigma {
            cfg.sigma = mode;
        }
        if self.c0.is_some() || self.sigma_max.is_some() {
            let (c0, sigma_max) = match cfg.sigma {
                SigmaMode::Estimate { c0, sigma_max } => (c0, sigma_max),
                _ => (
                    levy_core::spectral::DEFAULT_C0,
                    levy_core::spectral::DEFAULT_SIGMA_MAX,
                ),
            };
            cfg.sigma = SigmaMode::Estimate {
                c0: self.c0.unwrap_or(c0),
                sigma_max: self.sigma_max.unwrap_or(sigma_max),
            };
        }
        cfg
    }
}

/// Where the increments come from: a file, or a fresh simulation.
#[derive(Args, Debug, Clone)]
struct SampleArgs {
    /// CSV of increments (`k,x` or a single column).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Model to simulate from when no input file is given.
    #[arg(long, default_value = "gamma:c=30,lambda=1")]
    model: LevyModel,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl SampleArgs {
    fn load(&self) -> Result<IncrementSample> {
        Ok(match &self.input {
            Some(path) => {
                let xs =
                    read_increments(path).with_context(|| format!("reading {}", path.display()))?;
                IncrementSample::new(xs, self.delta)?
            }
            None => {
                sample_increments_stream(&self.model, self.n, self.delta, self.seed, self.stream)?
            }
        })
    }

    fn describe(&self) -> serde_json::Value {
        match &self.input {
            Some(path) => json!({ "input": path.display().to_string(), "delta": self.delta }),
            None => json!({
                "model": self.model,
                "n": self.n,
                "delta": self.delta,
                "seed": self.seed,
                "stream": self.stream,
            }),
        }
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    sample: SampleArgs,
    #[arg(long, default_value = "spectral")]
    method: Method,
    /// `N` or `calN` (tail function).
    #[arg(long, default_value = "N")]
    target: String,
    /// Distance from the origin below which the tail function is undefined.
    #[arg(long, default_value_t = 0.1)]
    zeta: f64,
    #[arg(long, default_value = "min-one-inv-x2")]
    clip: ClipFunction,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    spectral: SpectralArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BandArgs {
    #[command(flatten)]
    sample: SampleArgs,
    #[arg(long, default_value = "spectral")]
    method: Method,
    #[arg(long, default_value = "min-one-inv-x2")]
    clip: ClipFunction,
    /// Target coverage.
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    spectral: SpectralArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    band: BandArgs,
    /// Model whose `N` is the null hypothesis.
    #[arg(long)]
    hypothesis: LevyModel,
}

#[derive(Args, Debug, Clone)]
struct ExperimentArgs {
    /// JSON experiment configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<LevyModel>,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    clip: Option<ClipFunction>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    spectral: SpectralArgs,
    /// Output file (JSON for coverage); standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let Some(m) = &self.methods {
            cfg.methods = m.clone();
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.reps {
            cfg.reps = v;
        }
        if let Some(v) = self.level {
            cfg.level = v;
        }
        if let Some(v) = self.base_seed {
            cfg.base_seed = v;
        }
        if let Some(v) = self.clip {
            cfg.clip = v;
        }
        cfg.grid = self.grid.spec(cfg.grid)?;
        cfg.spectral = self.spectral.apply(cfg.spectral);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct FigureArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Number of overlaid estimates.
    #[arg(long)]
    curves: Option<usize>,
    /// Directory receiving `figure_<method>.csv` and the sidecar.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Also render `figure_<method>.svg`.
    #[arg(long)]
    svg: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Comma-separated sampling intervals.
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// Keep `n·Δ` at this value; otherwise `n` is kept fixed.
    #[arg(long)]
    horizon: Option<f64>,
    /// Point at which the mean signed error is reported.
    #[arg(long, allow_hyphen_values = true)]
    probe_t: Option<f64>,
    /// Also write the exact-CF smoothing bias for these bandwidths.
    #[arg(long, value_delimiter = ',')]
    oracle_h: Option<Vec<f64>>,
    /// Output for the oracle smoothing sweep.
    #[arg(long)]
    oracle_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuantileArgs {
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.95,0.99")]
    level: Vec<f64>,
    /// Evaluate the distribution function at these points instead.
    #[arg(long, value_delimiter = ',')]
    cdf: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<LevyError>() {
        Some(le) if le.is_estimation_failure() => 3,
        Some(LevyError::Io(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("LEVY_LAB_THREADS") {
        let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            LevyError::config(format!(
                "LEVY_LAB_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Truth(a) => truth(a),
        Command::Estimate(a) => estimate(a),
        Command::Band(a) => band(a),
        Command::Test(a) => test(a),
        Command::Coverage(a) => coverage(a),
        Command::Figure(a) => figure(a),
        Command::BiasSweep(a) => bias_sweep(a),
        Command::Quantile(a) => quantile(a),
    }
}

/// Writes to `path`, or to standard output through a temporary buffer.
fn emit(path: Option<&Path>, write: impl FnOnce(&Path) -> levy_core::Result<()>) -> Result<()> {
    match path {
        Some(p) => Ok(write(p)?),
        None => {
            let tmp = std::env::temp_dir().join(format!("levy-lab-{}.out", std::process::id()));
            write(&tmp)?;
            let text = fs::read(&tmp)?;
            fs::remove_file(&tmp)?;
            std::io::stdout().write_all(&text)?;
            Ok(())
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let sample = sample_increments_stream(&a.model, a.n, a.delta, a.seed, a.stream)?;
    emit(a.out.as_deref(), |p| {
        write_increments(p, &sample.increments)
    })
}

fn truth(a: TruthArgs) -> Result<()> {
    a.model.validate()?;
    if !(a.t_min < a.t_max) || a.points < 2 {
        return Err(
            LevyError::config("truth grid needs t_min < t_max and at least two points").into(),
        );
    }
    let grid = linspace(a.t_min, a.t_max, a.points);
    let values = a.model.true_n_curve(a.clip, &grid, a.tol)?;
    emit(a.out.as_deref(), |p| {
        write_csv_columns(p, &["t", "N_true"], &[&grid, &values])
    })
}

fn resolve_grid(
    grid: &GridArgs,
    sample: &IncrementSample,
    spectral: &SpectralConfig,
) -> Result<Vec<f64>> {
    let spec = grid.spec(GridSpec::default())?;
    spec.validate()?;
    Ok(spec.resolve(sample, spectral.x_range))
}

fn spectral_density(sample: &IncrementSample, cfg: &SpectralConfig) -> Result<SpectralDensity> {
    Ok(SpectralPipeline::new(*cfg, sample.delta)?.density(sample)?)
}

fn estimate(a: EstimateArgs) -> Result<()> {
    let sample = a.sample.load()?;
    let spectral = a.spectral.apply(SpectralConfig::default());
    spectral.validate()?;
    let grid = resolve_grid(&a.grid, &sample, &spectral)?;
    let (curve, diagnostics): (EstimateCurve, Option<SpectralDiagnostics>) =
        match (a.method, a.target.as_str()) {
            (Method::Direct, "N") => (direct_n(&sample, a.clip, &grid)?, None),
            (Method::Direct, "calN") => (direct_cal_n(&sample, a.zeta, &grid)?, None),
            (Method::Spectral, "N") => {
                let d = spectral_density(&sample, &spectral)?;
                (d.n_curve(a.clip, &grid, sample.len())?, Some(d.diagnostics))
            }
            (Method::Spectral, "calN") => {
                let d = spectral_density(&sample, &spectral)?;
                (
                    d.cal_n_curve(a.zeta, &grid, sample.len())?,
                    Some(d.diagnostics),
                )
            }
            (_, other) => {
                return Err(
                    LevyError::config(format!("unknown target `{other}`; use N or calN")).into(),
                )
            }
        };
    emit(a.out.as_deref(), |p| {
        write_csv_columns(p, &["t", "value"], &[&curve.grid, &curve.values])
    })?;
    if let Some(out) = &a.out {
        let sidecar = json!({
            "command": "estimate",
            "config": {
                "sample": a.sample.describe(),
                "method": a.method,
                "target": a.target,
                "zeta": a.zeta,
                "clip": a.clip,
                "grid": { "lo": grid[0], "hi": grid[grid.len() - 1], "points": grid.len() },
                "spectral": spectral,
                "bandwidth": spectral.bandwidth(sample.delta),
            },
            "diagnostics": diagnostics,
        });
        write_json(sidecar_path(out), &sidecar)?;
    }
    Ok(())
}

fn compute_band(a: &BandArgs) -> Result<(MethodOutput, SpectralConfig)> {
    if !(a.level > 0.0 && a.level < 1.0) {
        return Err(LevyError::config(format!("level must lie in (0,1), got {}", a.level)).into());
    }
    let sample = a.sample.load()?;
    let spectral = a.spectral.apply(SpectralConfig::default());
    spectral.validate()?;
    let grid = resolve_grid(&a.grid, &sample, &spectral)?;
    let pipeline = match a.method {
        Method::Spectral => Some(SpectralPipeline::new(spectral, sample.delta)?),
        Method::Direct => None,
    };
    let out = estimate_with_band(
        &sample,
        a.method,
        a.clip,
        &grid,
        pipeline.as_ref(),
        1.0 - a.level,
    )?;
    Ok((out, spectral))
}

fn band(a: BandArgs) -> Result<()> {
    let (out, spectral) = compute_band(&a)?;
    let b = &out.band;
    let grid = &b.curve.grid;
    let (lower, upper) = (b.lower(), b.upper());
    emit(a.out.as_deref(), |p| {
        write_csv_columns(
            p,
            &["t", "lower", "estimate", "upper"],
            &[&b.curve.grid, &lower, &b.curve.values, &upper],
        )
    })?;
    if let Some(path) = &a.out {
        let sidecar = json!({
            "command": "band",
            "config": {
                "sample": a.sample.describe(),
                "method": a.method,
                "clip": a.clip,
                "level": a.level,
                "grid": { "lo": grid[0], "hi": grid[grid.len() - 1], "points": grid.len() },
                "spectral": spectral,
            },
            "half_width": b.half_width,
            "q_value": b.q_value,
            "d_value": b.d_value,
            "diagnostics": out.diagnostics,
        });
        write_json(sidecar_path(path), &sidecar)?;
    }
    Ok(())
}

fn test(a: TestArgs) -> Result<()> {
    a.hypothesis.validate()?;
    let band = compute_band(&a.band)?.0.band;
    let truth = a
        .hypothesis
        .true_n_curve(a.band.clip, &band.curve.grid, levy_core::DEFAULT_TOL)?;
    let lookup = |t: f64| {
        let k = band.curve.grid.partition_point(|&g| g < t);
        truth[k]
    };
    let outcome = ks_test(&band, lookup);
    let mut text = serde_json::to_string_pretty(&outcome)?;
    text.push('\n');
    match &a.band.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn coverage(a: ExperimentArgs) -> Result<()> {
    let cfg = a.resolve()?;
    let reports = run_coverage(&cfg)?;
    let doc = json!({ "command": "coverage", "config": cfg, "reports": reports });
    emit(a.out.as_deref(), |p| write_json(p, &doc))
}

fn figure(a: FigureArgs) -> Result<()> {
    let mut cfg = a.experiment.resolve()?;
    if let Some(c) = a.curves {
        cfg.figure_curves = c;
    }
    if let GridSpec::Auto { points } = cfg.grid {
        let (lo, hi) = figure_range(&cfg.model);
        cfg.grid = GridSpec::Fixed { lo, hi, points };
    }
    let panels = run_figure(&cfg)?;
    fs::create_dir_all(&a.out_dir)?;
    for panel in &panels {
        let mut header = vec![
            "t".to_string(),
            "truth".into(),
            "band_lower".into(),
            "band_upper".into(),
        ];
        header.extend((1..=panel.curves.len()).map(|k| format!("estimate_{k}")));
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows: Vec<Vec<f64>> = (0..panel.grid.len())
            .map(|i| {
                let mut row = vec![
                    panel.grid[i],
                    panel.truth[i],
                    panel.band_lower[i],
                    panel.band_upper[i],
                ];
                row.extend(panel.curves.iter().map(|c| c[i]));
                row
            })
            .collect();
        write_csv_rows(
            a.out_dir.join(format!("figure_{}.csv", panel.method)),
            &header_refs,
            &rows,
        )?;
        if a.svg {
            let title = format!("{} / {}", cfg.model, panel.method);
            fs::write(
                a.out_dir.join(format!("figure_{}.svg", panel.method)),
                svg::render(panel, &title),
            )?;
        }
    }
    let half_widths: Vec<_> = panels
        .iter()
        .map(|p| json!({ "method": p.method, "half_width": p.half_width }))
        .collect();
    write_json(
        a.out_dir.join("figure.json"),
        &json!({ "command": "figure", "config": cfg, "bands": half_widths }),
    )?;
    Ok(())
}

fn bias_sweep(a: SweepArgs) -> Result<()> {
    let mut cfg = a.experiment.resolve()?;
    if let Some(d) = &a.deltas {
        cfg.deltas = d.clone();
    }
    if a.horizon.is_some() {
        cfg.horizon = a.horizon;
    }
    if a.probe_t.is_some() {
        cfg.probe_t = a.probe_t;
    }
    cfg.validate()?;
    let rows = run_bias_sweep(&cfg)?;
    let out = a.experiment.out.as_deref();
    emit(out, |p| {
        let mut text = String::from(
            "delta,n,method,reps,mean_sup_error,sup_bias,mean_signed_error_at_probe\n",
        );
        for r in &rows {
            text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_f64(r.delta),
                r.n,
                r.method,
                r.reps,
                fmt_f64(r.mean_sup_error),
                fmt_f64(r.sup_bias),
                r.mean_signed_error_at_probe
                    .map(fmt_f64)
                    .unwrap_or_default()
            ));
        }
        Ok(fs::write(p, text)?)
    })?;
    if let Some(p) = out {
        write_json(
            sidecar_path(p),
            &json!({ "command": "bias-sweep", "config": cfg }),
        )?;
    }
    if let Some(hs) = &a.oracle_h {
        let grid = match cfg.grid {
            GridSpec::Fixed { lo, hi, points } => linspace(lo, hi, points),
            GridSpec::Auto { points } => {
                let (lo, hi) = figure_range(&cfg.model);
                linspace(lo, hi, points)
            }
        };
        let pairs = oracle_smoothing_bias(
            &cfg.model,
            cfg.delta,
            cfg.clip,
            &grid,
            cfg.spectral,
            hs,
            cfg.truth_tol,
        )?;
        let rows: Vec<Vec<f64>> = pairs.iter().map(|&(h, b)| vec![h, b]).collect();
        emit(a.oracle_out.as_deref(), |p| {
            write_csv_rows(p, &["h", "sup_bias"], &rows)
        })?;
    }
    Ok(())
}

fn quantile(a: QuantileArgs) -> Result<()> {
    let mut out = String::new();
    match a.cdf {
        Some(points) => {
            out.push_str("a,cdf\n");
            for x in points {
                out.push_str(&format!(
                    "{},{}\n",
                    fmt_f64(x),
                    fmt_f64(max_abs_brownian_cdf(x))
                ));
            }
        }
        None => {
            out.push_str("level,quantile\n");
            for p in a.level {
                out.push_str(&format!(
                    "{},{}\n",
                    fmt_f64(p),
                    fmt_f64(max_abs_brownian_quantile(p)?)
                ));
            }
        }
    }
    print!("{out}");
    Ok(())
}
