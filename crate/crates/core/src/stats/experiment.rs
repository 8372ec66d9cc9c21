//! Replicated scaling experiments and the binomial/Poisson comparison.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::functions::{empirical_pairing, TestFunction};
use super::moments::{
    covariance_matrix, normality_diagnostics, standardize, summarize, NormalityReport, NormalityThresholds, Summary,
};
use super::regression::{fit_loglog, FitWindow, LogLogFit};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::extremality::{
    birth_growth_accept, xi_auto, xi_downward_cone_with, xi_envelope_with, EnvelopeParams, ExtremalityResult,
};
use crate::geometry::{PointConfiguration, PsiSpec};
use crate::hull::{hull_vertices, BallSample};
use crate::math;
use crate::rng::derive_seed;
use crate::sampling::{
    default_time_cap, sample_binomial_box, sample_poisson_ball_spec, sample_poisson_box, DensitySpec, SamplingRegion,
};

/// What one replicate produced: one pairing per test function.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutput {
    pub values: Vec<f64>,
    pub points: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaEstimate {
    pub lambda: f64,
    pub replicates: usize,
    /// Per test function.
    pub summaries: Vec<Summary>,
    pub covariance: Vec<Vec<f64>>,
    /// Raw pairings `samples[f][r]`.
    pub samples: Vec<Vec<f64>>,
    pub normality: Vec<NormalityReport>,
    pub mean_points: f64,
    /// Points left without an envelope certificate, summed over replicates.
    pub unresolved: usize,
    pub time_cap: Option<f64>,
}

impl LambdaEstimate {
    /// `(x − mean)/sd` of the pairings of test function `f`.
    pub fn standardized(&self, f: usize) -> Vec<f64> {
        standardize(&self.samples[f])
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateReport {
    pub labels: Vec<String>,
    pub lambda_grid: Vec<f64>,
    pub per_lambda: Vec<LambdaEstimate>,
    /// Log-log fits of the mean and the variance per test function (`None` when a
    /// value in the window is not positive).
    pub mean_fits: Vec<Option<LogLogFit>>,
    pub var_fits: Vec<Option<LogLogFit>>,
    pub fit_window: FitWindow,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl EstimateReport {
    pub fn largest(&self) -> &LambdaEstimate {
        &self.per_lambda[self.per_lambda.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunOptions {
    pub fit_window: FitWindow,
    /// Two-sided confidence level of the slope intervals.
    pub level: f64,
    pub thresholds: NormalityThresholds,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { fit_window: FitWindow::TopHalf, level: 0.95, thresholds: NormalityThresholds::default() }
    }
}

/// Seed of replicate `r` at grid index `k`.
pub fn replicate_seed(root: u64, k: usize, r: usize) -> u64 {
    derive_seed(root, &[k as u64, r as u64], "replicate")
}

fn check_grid(grid: &[f64], field: &'static str) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::arg(field, "must be a nonempty list of positive values"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::arg(field, "must be strictly increasing"));
    }
    Ok(())
}

/// Runs `replicate(k, λ_k, seed)` for every grid point and replicate and aggregates.
///
/// The replicates are handed to `exec` as one flat task list; aggregation follows
/// the replicate index, so the report does not depend on the executor.
pub fn run_replicates<F>(
    labels: Vec<String>,
    lambda_grid: &[f64],
    replicates: usize,
    seed: u64,
    options: &RunOptions,
    exec: &impl Executor,
    replicate: F,
) -> Result<EstimateReport>
where
    F: Fn(usize, f64, u64) -> Result<ReplicateOutput> + Sync + Send,
{
    check_grid(lambda_grid, "lambda_grid")?;
    if replicates < 2 {
        return Err(Error::arg("replicates", "need at least 2 replicates"));
    }
    let nf = labels.len();
    let outputs = exec.map_indexed(lambda_grid.len() * replicates, |t| {
        let (k, r) = (t / replicates, t % replicates);
        replicate(k, lambda_grid[k], replicate_seed(seed, k, r))
    });
    let mut per_lambda = Vec::with_capacity(lambda_grid.len());
    let mut outputs = outputs.into_iter();
    for &lambda in lambda_grid {
        let mut samples = vec![Vec::with_capacity(replicates); nf];
        let (mut points, mut unresolved) = (0usize, 0usize);
        for _ in 0..replicates {
            let out = outputs.next().expect("one output per task")?;
            if out.values.len() != nf {
                return Err(Error::Method(format!(
                    "replicate returned {} values for {nf} functions",
                    out.values.len()
                )));
            }
            for (s, v) in samples.iter_mut().zip(&out.values) {
                s.push(*v);
            }
            points += out.points;
            unresolved += out.unresolved;
        }
        let summaries: Vec<Summary> = samples.iter().map(|s| summarize(s)).collect();
        let normality = samples.iter().map(|s| normality_diagnostics(&standardize(s), &options.thresholds)).collect();
        per_lambda.push(LambdaEstimate {
            lambda,
            replicates,
            covariance: covariance_matrix(&samples),
            summaries,
            samples,
            normality,
            mean_points: points as f64 / replicates as f64,
            unresolved,
            time_cap: None,
        });
    }
    let window = options.fit_window.range(lambda_grid.len());
    let fit = |select: &dyn Fn(&Summary) -> f64, f: usize| -> Option<LogLogFit> {
        let x: Vec<f64> = lambda_grid[window.clone()].to_vec();
        let y: Vec<f64> = per_lambda[window.clone()].iter().map(|e| select(&e.summaries[f])).collect();
        fit_loglog(&x, &y, options.level).ok()
    };
    let mean_fits = (0..nf).map(|f| fit(&|s| s.mean, f)).collect();
    let var_fits = (0..nf).map(|f| fit(&|s| s.var, f)).collect();
    let mut warnings = Vec::new();
    for e in &per_lambda {
        for (f, s) in e.summaries.iter().enumerate() {
            if !(s.var > 2.0 * s.se_var) {
                warnings.push(format!("lambda {}: variance of {} is within 2 SE of zero", e.lambda, labels[f]));
            }
        }
        if e.unresolved > 0 {
            warnings.push(format!("lambda {}: {} unresolved envelope points", e.lambda, e.unresolved));
        }
    }
    Ok(EstimateReport {
        labels,
        lambda_grid: lambda_grid.to_vec(),
        per_lambda,
        mean_fits,
        var_fits,
        fit_window: options.fit_window,
        seed,
        warnings,
    })
}

/// Which extremality routine computes the flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MethodChoice {
    /// Cone test where exact, envelope otherwise.
    #[default]
    Auto,
    DownwardCone,
    Envelope,
    BirthGrowth,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// Flags of the space-time functional on box samples.
    Extremality { psi: PsiSpec, method: MethodChoice, envelope: EnvelopeParams },
    /// Convex-hull vertices of ball samples.
    HullVertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Sampling {
    #[default]
    Poisson,
    /// Exactly `round(λ · mass)` points, so the intensity matches the Poisson input.
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TimeCap {
    /// The density's own `time_cap`.
    #[default]
    Spec,
    /// A per-λ height from [`default_time_cap`].
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct ScalingExperiment {
    pub density: DensitySpec,
    pub functional: Functional,
    pub lambda_grid: Vec<f64>,
    pub replicates: usize,
    pub functions: Vec<TestFunction>,
    pub seed: u64,
    pub time_cap: TimeCap,
    pub sampling: Sampling,
    pub options: RunOptions,
}

impl ScalingExperiment {
    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        check_grid(&self.lambda_grid, "lambda_grid")?;
        if self.replicates < 30 {
            return Err(Error::arg("replicates", format!("must be >= 30, got {}", self.replicates)));
        }
        if self.functions.is_empty() {
            return Err(Error::arg("functions", "need at least one test function"));
        }
        let (dim, is_box) = match &self.density.region {
            SamplingRegion::Box { lo, .. } => (lo.len(), true),
            SamplingRegion::Ball { d } | SamplingRegion::SphereShell { d, .. } => (*d, false),
        };
        for f in &self.functions {
            f.validate(dim)?;
        }
        match &self.functional {
            Functional::Extremality { psi, method, envelope } => {
                if !is_box {
                    return Err(Error::arg("region", "extremality experiments sample a box"));
                }
                envelope.validate()?;
                match (method, psi) {
                    (MethodChoice::DownwardCone, PsiSpec::PowerLaw { alpha }) if *alpha > 1.0 => {
                        return Err(Error::arg(
                            "method",
                            format!("the downward-cone test is exact only for alpha <= 1 (got alpha = {alpha})"),
                        ))
                    }
                    (MethodChoice::DownwardCone, PsiSpec::Tabulated { .. }) => {
                        return Err(Error::arg("method", "the downward-cone test needs a power-law profile"))
                    }
                    (MethodChoice::BirthGrowth, p) if *p != PsiSpec::PowerLaw { alpha: 1.0 } => {
                        return Err(Error::arg("method", "birth-growth acceptance needs alpha = 1"))
                    }
                    _ => {}
                }
            }
            Functional::HullVertices => {
                if is_box {
                    return Err(Error::arg("region", "hull experiments sample a ball"));
                }
                if self.sampling == Sampling::Binomial {
                    return Err(Error::arg("sampling", "hull experiments use Poisson input"));
                }
            }
        }
        if let TimeCap::Fixed(h) = self.time_cap {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::arg("time_cap", format!("must be > 0, got {h}")));
            }
        }
        Ok(())
    }

    /// Density with the time cap used at intensity `lambda`.
    pub fn density_at(&self, lambda: f64) -> DensitySpec {
        let mut spec = self.density.clone();
        let SamplingRegion::Box { lo, hi } = &spec.region else { return spec };
        spec.time_cap = match (self.time_cap, &self.functional) {
            (TimeCap::Spec, _) => spec.time_cap,
            (TimeCap::Fixed(h), _) => h,
            (TimeCap::Auto, Functional::Extremality { psi, .. }) => {
                let (rmin, rmax) = spec.rho0.bounds_on_box(lo, hi);
                let volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
                default_time_cap(spec.d(), psi.alpha_at_zero(), spec.delta, lambda, rmin, rmax, volume)
            }
            (TimeCap::Auto, Functional::HullVertices) => spec.time_cap,
        };
        spec
    }

    /// Flags of one sample.
    fn flags(&self, config: &PointConfiguration) -> Result<(Vec<bool>, usize)> {
        match &self.functional {
            Functional::Extremality { psi, method, envelope } => {
                let r: ExtremalityResult = match method {
                    MethodChoice::Auto => xi_auto(config, psi, envelope, &Sequential)?,
                    MethodChoice::DownwardCone => xi_downward_cone_with(config, psi, &Sequential)?,
                    MethodChoice::Envelope => xi_envelope_with(config, psi, envelope, &Sequential)?,
                    MethodChoice::BirthGrowth => birth_growth_accept(config, psi)?,
                };
                let unresolved = r.unresolved.len();
                Ok((r.flags, unresolved))
            }
            Functional::HullVertices => Ok((hull_vertices(&BallSample::from_config(config)?)?.flags, 0)),
        }
    }

    fn sample(&self, spec: &DensitySpec, lambda: f64, seed: u64) -> Result<PointConfiguration> {
        match (&self.functional, self.sampling) {
            (Functional::HullVertices, _) => sample_poisson_ball_spec(spec, lambda, seed),
            (_, Sampling::Poisson) => sample_poisson_box(spec, lambda, seed),
            (_, Sampling::Binomial) => {
                sample_binomial_box(spec, math::floor(lambda * spec.mass() + 0.5) as usize, seed)
            }
        }
    }

    /// One sample at `lambda` with its flags and the number of uncertified points.
    pub fn sample_with_flags(
        &self,
        spec: &DensitySpec,
        lambda: f64,
        seed: u64,
    ) -> Result<(PointConfiguration, Vec<bool>, usize)> {
        let config = self.sample(spec, lambda, seed)?;
        let (flags, unresolved) = self.flags(&config)?;
        Ok((config, flags, unresolved))
    }

    pub fn replicate(&self, spec: &DensitySpec, lambda: f64, seed: u64) -> Result<ReplicateOutput> {
        let (config, flags, unresolved) = self.sample_with_flags(spec, lambda, seed)?;
        let values =
            self.functions.iter().map(|f| empirical_pairing(&config, &flags, f)).collect::<Result<Vec<f64>>>()?;
        Ok(ReplicateOutput { values, points: config.len(), unresolved })
    }
}

pub fn run_scaling_experiment(experiment: &ScalingExperiment, exec: &impl Executor) -> Result<EstimateReport> {
    experiment.validate()?;
    let specs: Vec<DensitySpec> = experiment.lambda_grid.iter().map(|&l| experiment.density_at(l)).collect();
    let labels = experiment.functions.iter().map(|f| f.label()).collect();
    let mut report = run_replicates(
        labels,
        &experiment.lambda_grid,
        experiment.replicates,
        experiment.seed,
        &experiment.options,
        exec,
        |k, lambda, seed| experiment.replicate(&specs[k], lambda, seed),
    )?;
    if matches!(experiment.density.region, SamplingRegion::Box { .. }) {
        for (e, s) in report.per_lambda.iter_mut().zip(&specs) {
            e.time_cap = Some(s.time_cap);
        }
    }
    Ok(report)
}

/// Binomial against Poisson sampling at one size.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepoissonRow {
    pub n: usize,
    /// Poisson intensity with expected size `n`.
    pub lambda: f64,
    pub binomial: Summary,
    pub poisson: Summary,
    pub mean_ratio: f64,
    pub se_mean_ratio: f64,
    pub var_ratio: f64,
    pub se_var_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepoissonReport {
    pub rows: Vec<DepoissonRow>,
    /// Whether `|mean ratio − 1|` decreases along the grid.
    pub mean_deviation_decreasing: bool,
    pub seed: u64,
}

/// Compares `⟨f, ·⟩` under `n` i.i.d. points and under Poisson input with `n` expected points.
///
/// Both inputs of a replicate come from the same seed, so they share their first points;
/// the ratio of means is estimated from paired replicates.
pub fn depoissonization_check(
    density: &DensitySpec,
    psi: &PsiSpec,
    n_grid: &[usize],
    replicates: usize,
    f: &TestFunction,
    seed: u64,
    exec: &impl Executor,
) -> Result<DepoissonReport> {
    density.validate()?;
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha > 0.0 && *alpha <= 1.0 => {}
        _ => {
            return Err(Error::arg("alpha", "the comparison uses the cone test and needs a power law with alpha <= 1"))
        }
    }
    let SamplingRegion::Box { lo, .. } = &density.region else {
        return Err(Error::arg("region", "the comparison samples a box"));
    };
    f.validate(lo.len())?;
    if n_grid.is_empty() || n_grid[0] == 0 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("n_grid", "must be a nonempty increasing list of positive sizes"));
    }
    if replicates < 2 {
        return Err(Error::arg("replicates", "need at least 2 replicates"));
    }
    let mass = density.mass();
    let pairs = exec.map_indexed(n_grid.len() * replicates, |t| -> Result<(f64, f64)> {
        let (k, r) = (t / replicates, t % replicates);
        let s = replicate_seed(seed, k, r);
        let value = |config: PointConfiguration| -> Result<f64> {
            let flags = xi_downward_cone_with(&config, psi, &Sequential)?.flags;
            empirical_pairing(&config, &flags, f)
        };
        let b = value(sample_binomial_box(density, n_grid[k], s)?)?;
        let p = value(sample_poisson_box(density, n_grid[k] as f64 / mass, s)?)?;
        Ok((b, p))
    });
    let mut pairs = pairs.into_iter();
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let (mut bs, mut ps) = (Vec::with_capacity(replicates), Vec::with_capacity(replicates));
        for _ in 0..replicates {
            let (b, p) = pairs.next().expect("one pair per task")?;
            bs.push(b);
            ps.push(p);
        }
        let (binomial, poisson) = (summarize(&bs), summarize(&ps));
        let mean_ratio = binomial.mean / poisson.mean;
        let influence: Vec<f64> = bs.iter().zip(&ps).map(|(b, p)| (b - mean_ratio * p) / poisson.mean).collect();
        let se_mean_ratio = math::sqrt(summarize(&influence).var / replicates as f64);
        let var_ratio = binomial.var / poisson.var;
        let (rb, rp) = (binomial.se_var / binomial.var, poisson.se_var / poisson.var);
        let se_var_ratio = var_ratio * math::sqrt(rb * rb + rp * rp);
        rows.push(DepoissonRow {
            n,
            lambda: n as f64 / mass,
            binomial,
            poisson,
            mean_ratio,
            se_mean_ratio,
            var_ratio,
            se_var_ratio,
        });
    }
    let mean_deviation_decreasing =
        rows.windows(2).all(|w| (w[1].mean_ratio - 1.0).abs() < (w[0].mean_ratio - 1.0).abs());
    Ok(DepoissonReport { rows, mean_deviation_decreasing, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Rho0;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn synthetic_injection_recovers_slope() {
        let grid: Vec<f64> = (8..=14).map(|k| 2f64.powi(k)).collect();
        let opts = RunOptions { fit_window: FitWindow::All, ..RunOptions::default() };
        let report = run_replicates(vec!["c".into()], &grid, 200, 11, &opts, &Sequential, |_, lambda, seed| {
            let mut rng = crate::rng::stream(seed, &[], "noise");
            let noise: f64 = StandardNormal.sample(&mut rng);
            Ok(ReplicateOutput { values: vec![3.0 * lambda.sqrt() + noise], points: 0, unresolved: 0 })
        })
        .unwrap();
        let fit = report.mean_fits[0].unwrap();
        assert!((fit.slope - 0.5).abs() < 0.01, "{fit:?}");
        assert!(fit.ci_low < 0.5 && 0.5 < fit.ci_high, "{fit:?}");
        for e in &report.per_lambda {
            assert!((e.summaries[0].var - 1.0).abs() < 0.3);
        }
    }

    #[test]
    fn replicates_are_keyed_by_index() {
        let grid = [1.0, 2.0];
        let run = || {
            run_replicates(vec!["u".into()], &grid, 5, 3, &RunOptions::default(), &Sequential, |_, _, seed| {
                let v: f64 = crate::rng::stream(seed, &[], "u").random();
                Ok(ReplicateOutput { values: vec![v], points: 1, unresolved: 0 })
            })
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
        assert_ne!(a.per_lambda[0].samples, a.per_lambda[1].samples);
    }

    fn small_experiment() -> ScalingExperiment {
        ScalingExperiment {
            density: DensitySpec::new_box(vec![0.0], vec![1.0], Rho0::Constant(1.0), 0.0, 1.0).unwrap(),
            functional: Functional::Extremality {
                psi: PsiSpec::PowerLaw { alpha: 1.0 },
                method: MethodChoice::Auto,
                envelope: EnvelopeParams::default(),
            },
            lambda_grid: vec![64.0, 128.0, 256.0],
            replicates: 30,
            functions: vec![TestFunction::Constant(1.0)],
            seed: 5,
            time_cap: TimeCap::Auto,
            sampling: Sampling::Poisson,
            options: RunOptions::default(),
        }
    }

    #[test]
    fn scaling_experiment_counts_extremal_points() {
        let exp = small_experiment();
        let report = run_scaling_experiment(&exp, &Sequential).unwrap();
        // With f ≡ 1 the pairing is the extremal count, which is at least 1 and at most the sample size.
        for e in &report.per_lambda {
            assert!(e.samples[0].iter().all(|v| *v >= 1.0));
            assert!(e.summaries[0].mean <= e.mean_points);
            assert!(e.covariance[0][0] >= 0.0);
            assert!((e.covariance[0][0] - e.summaries[0].var).abs() < 1e-9 * e.summaries[0].var.max(1.0));
            assert!(e.time_cap.unwrap() > 0.0);
        }
    }

    #[test]
    fn validation_names_fields() {
        let mut exp = small_experiment();
        exp.replicates = 10;
        assert!(matches!(exp.validate(), Err(Error::Argument { field: "replicates", .. })));
        let mut exp = small_experiment();
        exp.lambda_grid = vec![2.0, 1.0];
        assert!(matches!(exp.validate(), Err(Error::Argument { field: "lambda_grid", .. })));
        let mut exp = small_experiment();
        exp.functional = Functional::Extremality {
            psi: PsiSpec::PowerLaw { alpha: 2.0 },
            method: MethodChoice::DownwardCone,
            envelope: EnvelopeParams::default(),
        };
        assert!(matches!(exp.validate(), Err(Error::Argument { field: "method", .. })));
    }

    #[test]
    fn depoissonization_smoke() {
        let spec = DensitySpec::new_box(vec![0.0], vec![1.0], Rho0::Constant(1.0), 0.0, 1.0).unwrap();
        let r = depoissonization_check(
            &spec,
            &PsiSpec::PowerLaw { alpha: 1.0 },
            &[5, 50],
            40,
            &TestFunction::Constant(1.0),
            1,
            &Sequential,
        )
        .unwrap();
        for row in &r.rows {
            assert!(row.mean_ratio.is_finite() && row.mean_ratio > 0.0);
        }
        assert!(depoissonization_check(
            &spec,
            &PsiSpec::PowerLaw { alpha: 2.0 },
            &[5],
            10,
            &TestFunction::Constant(1.0),
            1,
            &Sequential
        )
        .is_err());
    }
}
