//! Runs a configuration and writes its artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use psi_growth_core::exec::Executor;
use psi_growth_core::hull::BallSample;
use psi_growth_core::special::downward_cone_mass;
use psi_growth_core::stats::{
    depoissonization_check, estimate_one_point_correlation, estimate_two_point_correlation, limit_constants,
    localization_sample, replicate_seed, run_scaling_experiment, survival_curve, ConeAnalytic, CorrelationSource,
    EstimateReport, Functional, LimitSetup, McEstimate, MethodChoice, QuadratureOptions,
};
use psi_growth_core::{compute_exponents, ScalingExponents};
use serde::Serialize;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::exec::{default_workers, Parallel};
use crate::formats::{ball_csv, config_csv, num, plot_csv, report_csv, sha256_hex, write_file};

/// Command-line overrides, applied over the file's values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("run failed: {0:#}")]
    Runtime(#[from] anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OutputEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config_sha256: String,
    pub code_version: String,
    pub seed: u64,
    pub workers: usize,
    pub wall_time_seconds: f64,
    pub outputs: Vec<OutputEntry>,
}

/// A file produced by a run, kept in memory until the run succeeds.
pub struct Artifact {
    pub name: &'static str,
    pub contents: Vec<u8>,
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

/// Configuration after applying overrides.
pub fn load_effective(path: &Path, overrides: &Overrides) -> Result<(ExperimentConfig, Vec<u8>), ConfigError> {
    let bytes =
        std::fs::read(path).map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| ConfigError::new("config", "file is not UTF-8"))?;
    let mut config = crate::config::parse(text)?;
    if let Some(s) = overrides.seed {
        config.seed = s;
    }
    if let Some(w) = overrides.workers {
        config.workers = Some(w);
    }
    if let Some(o) = &overrides.out {
        config.output = Some(o.display().to_string());
    }
    config.validate()?;
    Ok((config, bytes))
}

/// Expected sizes and memory for `validate`.
pub fn describe(config: &ExperimentConfig) -> Result<String, ConfigError> {
    let mut out = String::from("OK\n");
    let bytes_per_point = |d: usize| (d + 1) * 8;
    let d = config.model.d;
    match config.experiment {
        ExperimentKind::Correlation => {
            let c = config.correlation.as_ref().expect("validated");
            let setup = correlation_setup(config)?;
            let k = d - 1;
            let vol = psi_growth_core::math::unit_ball_volume(k) * setup.window_radius.powi(k as i32);
            let n = vol * setup.time_cap.powf(1.0 + config.model.delta) / (1.0 + config.model.delta);
            writeln!(out, "window radius {}, time cap {}", setup.window_radius, setup.time_cap).unwrap();
            writeln!(out, "expected points per replicate {:.0}, replicates {}", n, c.replicates).unwrap();
            writeln!(out, "estimated peak memory {}", human(n * bytes_per_point(d) as f64 * 4.0)).unwrap();
        }
        ExperimentKind::Depoissonize => {
            for n in &config.grid.n {
                writeln!(out, "n {n}: expected points {n}").unwrap();
            }
            let top = *config.grid.n.last().expect("validated") as f64;
            writeln!(out, "estimated peak memory {}", human(top * bytes_per_point(d) as f64 * 8.0)).unwrap();
        }
        ExperimentKind::Localization => {
            let l = config.localization.as_ref().expect("validated");
            let density = config.density()?;
            let n = l.lambda * density.mass();
            writeln!(out, "lambda {}: expected points {:.0}, configurations {}", l.lambda, n, config.grid.replicates)
                .unwrap();
            writeln!(out, "estimated peak memory {}", human(n * bytes_per_point(d) as f64 * 8.0)).unwrap();
        }
        _ => {
            let exp = config.scaling_experiment()?;
            let mut top = 0.0f64;
            for &l in &exp.lambda_grid {
                let n = l * exp.density_at(l).mass();
                top = top.max(n);
                writeln!(out, "lambda {l}: expected points {n:.0}").unwrap();
            }
            writeln!(out, "replicates {}, test functions {}", exp.replicates, exp.functions.len()).unwrap();
            let samples = (exp.lambda_grid.len() * exp.replicates * exp.functions.len()) as f64 * 8.0;
            writeln!(out, "estimated peak memory {}", human(top * bytes_per_point(d) as f64 * 8.0 + samples)).unwrap();
        }
    }
    Ok(out)
}

fn human(bytes: f64) -> String {
    let units = ["B", "KiB", "MiB", "GiB", "TiB"];
    let mut v = bytes;
    let mut u = 0;
    while v >= 1024.0 && u + 1 < units.len() {
        v /= 1024.0;
        u += 1;
    }
    format!("{v:.1} {}", units[u])
}

/// Validates, runs and writes all artifacts plus the manifest into the output directory.
pub fn run(path: &Path, overrides: &Overrides) -> Result<(PathBuf, Manifest), RunError> {
    let (config, raw) = load_effective(path, overrides)?;
    let out = PathBuf::from(config.output.clone().unwrap_or_else(|| "psi-growth-out".into()));
    let workers = config.workers.unwrap_or_else(default_workers);
    let exec = Parallel::new(Some(workers)).context("cannot start worker pool")?;
    let start = Instant::now();
    let artifacts = execute(&config, &exec)?;
    let wall = start.elapsed().as_secs_f64();
    std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut outputs = Vec::new();
    for a in &artifacts {
        write_file(&out, a.name, &a.contents)?;
        outputs.push(OutputEntry {
            name: a.name.to_string(),
            sha256: sha256_hex(&a.contents),
            bytes: a.contents.len(),
        });
    }
    let manifest = Manifest {
        experiment: config.experiment.name().to_string(),
        config_sha256: sha256_hex(&raw),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        workers: exec.workers(),
        wall_time_seconds: wall,
        outputs,
    };
    write_file(&out, "manifest.json", &json(&manifest))?;
    Ok((out, manifest))
}

/// The artifacts of a validated configuration; contents depend only on the configuration and seed.
pub fn execute(config: &ExperimentConfig, exec: &impl Executor) -> Result<Vec<Artifact>> {
    match config.experiment {
        ExperimentKind::Depoissonize => depoissonize(config, exec),
        ExperimentKind::Correlation => correlation(config, exec),
        ExperimentKind::Localization => localization(config, exec),
        _ => scaling(config, exec),
    }
}

/// The configuration as recorded in reports: without worker count and output directory.
fn recorded(config: &ExperimentConfig) -> ExperimentConfig {
    ExperimentConfig { workers: None, output: None, ..config.clone() }
}

fn exponents(config: &ExperimentConfig) -> Result<ScalingExponents> {
    Ok(compute_exponents(config.model.d, config.model.alpha, config.model.delta)?)
}

#[derive(Serialize)]
struct ScalingJson<'a> {
    experiment: &'static str,
    config: ExperimentConfig,
    exponents: Option<ScalingExponents>,
    report: &'a EstimateReport,
}

#[derive(Serialize)]
struct SampleJson {
    layout: &'static str,
    method: String,
    alpha: f64,
    lambda: f64,
    seed: u64,
    points: usize,
    flagged: usize,
    unresolved: usize,
}

fn scaling(config: &ExperimentConfig, exec: &impl Executor) -> Result<Vec<Artifact>> {
    let exp = config.scaling_experiment()?;
    let report = run_scaling_experiment(&exp, exec)?;
    let hull = matches!(exp.functional, Functional::HullVertices);
    let doc = ScalingJson {
        experiment: config.experiment.name(),
        config: recorded(config),
        exponents: if hull { None } else { Some(exponents(config)?) },
        report: &report,
    };
    // The first replicate at the largest intensity, with its flags.
    let k = exp.lambda_grid.len() - 1;
    let lambda = exp.lambda_grid[k];
    let seed = replicate_seed(exp.seed, k, 0);
    let (sample, flags, unresolved) = exp.sample_with_flags(&exp.density_at(lambda), lambda, seed)?;
    let (layout, csv, method) = if hull {
        ("x1,...,xd[,flag]", ball_csv(&BallSample::from_config(&sample)?, Some(&flags)), "hull-vertices".to_string())
    } else {
        let m = match config.method() {
            MethodChoice::Auto if config.model.alpha <= 1.0 => MethodChoice::DownwardCone,
            MethodChoice::Auto => MethodChoice::Envelope,
            m => m,
        };
        let m = serde_json::to_value(m)?.as_str().unwrap_or_default().to_string();
        ("x1,...,x{d-1},h[,flag]", config_csv(&sample, Some(&flags)), m)
    };
    let meta = SampleJson {
        layout,
        method,
        alpha: config.model.alpha,
        lambda,
        seed,
        points: sample.len(),
        flagged: flags.iter().filter(|f| **f).count(),
        unresolved,
    };
    Ok(vec![
        Artifact { name: "report.json", contents: json(&doc) },
        Artifact { name: "report.csv", contents: report_csv(&report).into_bytes() },
        Artifact { name: "plot.csv", contents: plot_csv(&report).into_bytes() },
        Artifact { name: "sample.csv", contents: csv.into_bytes() },
        Artifact { name: "sample.json", contents: json(&meta) },
    ])
}

fn depoissonize(config: &ExperimentConfig, exec: &impl Executor) -> Result<Vec<Artifact>> {
    let density = config.density()?;
    let f = config.functions().into_iter().next().expect("at least one function");
    let report =
        depoissonization_check(&density, &config.psi(), &config.grid.n, config.grid.replicates, &f, config.seed, exec)?;
    let mut csv = String::from(
        "n,lambda,R,binomial_mean,binomial_var,poisson_mean,poisson_var,mean_ratio,se_mean_ratio,var_ratio,se_var_ratio\n",
    );
    for r in &report.rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            num(r.lambda),
            r.binomial.n,
            num(r.binomial.mean),
            num(r.binomial.var),
            num(r.poisson.mean),
            num(r.poisson.var),
            num(r.mean_ratio),
            num(r.se_mean_ratio),
            num(r.var_ratio),
            num(r.se_var_ratio)
        )?;
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        experiment: &'static str,
        config: ExperimentConfig,
        report: &'a psi_growth_core::stats::DepoissonReport,
    }
    let doc = Doc { experiment: config.experiment.name(), config: recorded(config), report: &report };
    Ok(vec![
        Artifact { name: "report.json", contents: json(&doc) },
        Artifact { name: "report.csv", contents: csv.into_bytes() },
    ])
}

/// Window and truncation of the limit process for a correlation run.
fn correlation_setup(config: &ExperimentConfig) -> Result<LimitSetup, ConfigError> {
    let c = config.correlation.as_ref().ok_or_else(|| ConfigError::new("correlation", "section is required"))?;
    let m = &config.model;
    let top = c.h_grid.iter().chain(c.pairs.iter().flat_map(|p| [&p.h1, &p.h2])).fold(0.0f64, |a, b| a.max(*b));
    let offset = c.pairs.iter().map(|p| p.y2.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0f64, f64::max);
    let time_cap = c.time_cap.unwrap_or(2.0 * top.max(0.5));
    let window = c.window_radius.unwrap_or(time_cap.powf(1.0 / m.alpha) + offset + 1.0);
    let mut setup = LimitSetup::new(m.d, m.alpha, m.delta, window, time_cap)
        .map_err(|e| ConfigError::new("correlation", e.to_string()))?;
    setup.envelope = config.method.envelope();
    Ok(setup)
}

fn correlation(config: &ExperimentConfig, exec: &impl Executor) -> Result<Vec<Artifact>> {
    let c = config.correlation.as_ref().expect("validated");
    let m = &config.model;
    let setup = correlation_setup(config)?;
    let exact = m.alpha <= 1.0;
    let analytic = if exact { Some(ConeAnalytic::new(m.d, m.alpha, m.delta)?) } else { None };
    let mut one_point: Vec<(f64, McEstimate, Option<f64>)> = Vec::new();
    for &h in &c.h_grid {
        let e = estimate_one_point_correlation(&setup, h, c.replicates, config.seed, exec)?;
        let a = analytic.as_ref().map(|_| (-downward_cone_mass(m.d - 1, m.alpha, m.delta, h)).exp());
        one_point.push((h, e, a));
    }
    let mut two_point = Vec::new();
    for (i, p) in c.pairs.iter().enumerate() {
        let seed = psi_growth_core::rng::derive_seed(config.seed, &[i as u64], "pair");
        let e = estimate_two_point_correlation(&setup, p.h1, &p.y2, p.h2, c.replicates, seed, exec)?;
        let r = p.y2.iter().map(|v| v * v).sum::<f64>().sqrt();
        let a = match &analytic {
            Some(src) => Some(src.two_point(p.h1, r, p.h2)?.0),
            None => None,
        };
        two_point.push((p.clone(), e, a));
    }
    let constants = match &analytic {
        Some(src) => Some(limit_constants(src, &QuadratureOptions { nodes: c.nodes, h_max: None }, exec)?),
        None => None,
    };
    let mut csv = String::from("kind,h1,r,h2,estimate,se,analytic\n");
    for (h, e, a) in &one_point {
        writeln!(csv, "one-point,{},,,{},{},{}", num(*h), num(e.value), num(e.se), a.map(num).unwrap_or_default())?;
    }
    for (p, e, a) in &two_point {
        let r = p.y2.iter().map(|v| v * v).sum::<f64>().sqrt();
        writeln!(
            csv,
            "two-point,{},{},{},{},{},{}",
            num(p.h1),
            num(r),
            num(p.h2),
            num(e.value),
            num(e.se),
            a.map(num).unwrap_or_default()
        )?;
    }
    #[derive(Serialize)]
    struct OnePoint {
        h: f64,
        estimate: McEstimate,
        analytic: Option<f64>,
    }
    #[derive(Serialize)]
    struct TwoPoint {
        h1: f64,
        y2: Vec<f64>,
        h2: f64,
        estimate: McEstimate,
        analytic: Option<f64>,
    }
    #[derive(Serialize)]
    struct Doc {
        experiment: &'static str,
        config: ExperimentConfig,
        setup: LimitSetup,
        one_point: Vec<OnePoint>,
        two_point: Vec<TwoPoint>,
        constants: Option<psi_growth_core::stats::LimitConstants>,
    }
    let doc = Doc {
        experiment: config.experiment.name(),
        config: recorded(config),
        setup,
        one_point: one_point.into_iter().map(|(h, estimate, analytic)| OnePoint { h, estimate, analytic }).collect(),
        two_point: two_point
            .into_iter()
            .map(|(p, estimate, analytic)| TwoPoint { h1: p.h1, y2: p.y2, h2: p.h2, estimate, analytic })
            .collect(),
        constants,
    };
    Ok(vec![
        Artifact { name: "report.json", contents: json(&doc) },
        Artifact { name: "report.csv", contents: csv.into_bytes() },
    ])
}

fn localization(config: &ExperimentConfig, exec: &impl Executor) -> Result<Vec<Artifact>> {
    let l = config.localization.as_ref().expect("validated");
    let density = config.density()?;
    let sample = localization_sample(
        &density,
        &config.psi(),
        l.lambda,
        &l.r_grid,
        l.margin,
        config.grid.replicates,
        config.seed,
        &config.method.envelope(),
        exec,
    )?;
    let grid: Vec<f64> = l.r_grid.iter().map(|r| r * sample.scale).collect();
    let survival = survival_curve(&sample.radii, &grid);
    let mut csv = String::from("rescaled_radius,survival\n");
    for (g, s) in grid.iter().zip(&survival) {
        writeln!(csv, "{},{}", num(*g), num(*s))?;
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        experiment: &'static str,
        config: ExperimentConfig,
        lambda: f64,
        scale: f64,
        points: usize,
        unlocalized: usize,
        rescaled_grid: &'a [f64],
        survival: &'a [f64],
    }
    let doc = Doc {
        experiment: config.experiment.name(),
        config: recorded(config),
        lambda: sample.lambda,
        scale: sample.scale,
        points: sample.radii.len(),
        unlocalized: sample.radii.iter().filter(|r| r.is_infinite()).count(),
        rescaled_grid: &grid,
        survival: &survival,
    };
    let mut radii = String::from("rescaled_radius\n");
    for r in &sample.radii {
        writeln!(radii, "{}", num(*r))?;
    }
    Ok(vec![
        Artifact { name: "report.json", contents: json(&doc) },
        Artifact { name: "report.csv", contents: csv.into_bytes() },
        Artifact { name: "radii.csv", contents: radii.into_bytes() },
    ])
}
