//! Experiment configuration files (TOML, one table per concern).

use std::path::Path;

use psi_growth_core::extremality::EnvelopeParams;
use psi_growth_core::sampling::{DensitySpec, Rho0};
use psi_growth_core::stats::{
    FitWindow, Functional, MethodChoice, NormalityThresholds, RunOptions, Sampling, ScalingExperiment, TestFunction,
    TimeCap,
};
use psi_growth_core::{compute_exponents, PsiSpec};
use serde::{Deserialize, Serialize};

/// A configuration problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }

    fn from_core(section: &str, e: psi_growth_core::Error) -> Self {
        match e {
            psi_growth_core::Error::Argument { field, reason } => Self::new(format!("{section}.{field}"), reason),
            other => Self::new(section, other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Scaling,
    Clt,
    Hull,
    Maximal,
    BirthGrowth,
    Correlation,
    Depoissonize,
    Localization,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Scaling => "scaling",
            Self::Clt => "clt",
            Self::Hull => "hull",
            Self::Maximal => "maximal",
            Self::BirthGrowth => "birth-growth",
            Self::Correlation => "correlation",
            Self::Depoissonize => "depoissonize",
            Self::Localization => "localization",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub model: ModelSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub method: MethodSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<FunctionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub d: usize,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub rho0: Rho0Spec,
    #[serde(default)]
    pub region: RegionSpec,
    /// Fixed truncation height; per-λ automatic height when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_cap: Option<f64>,
    #[serde(default)]
    pub sampling: Sampling,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Rho0Spec {
    Constant { value: f64 },
    Affine { base: f64, slope: Vec<f64> },
}

impl Default for Rho0Spec {
    fn default() -> Self {
        Self::Constant { value: 1.0 }
    }
}

impl Rho0Spec {
    fn to_core(&self) -> Rho0 {
        match self {
            Self::Constant { value } => Rho0::Constant(*value),
            Self::Affine { base, slope } => Rho0::Affine { base: *base, slope: slope.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RegionSpec {
    /// `Π [lo_k, hi_k]` in the spatial coordinates.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// The unit ball of dimension `model.d`.
    Ball,
    Shell {
        inner: f64,
    },
}

impl Default for RegionSpec {
    fn default() -> Self {
        Self::Box { lo: vec![0.0], hi: vec![1.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
}

fn default_replicates() -> usize {
    200
}

impl Default for GridSection {
    fn default() -> Self {
        Self { lambda: Vec::new(), n: Vec::new(), replicates: default_replicates() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    Coordinate {
        exponents: Vec<u32>,
    },
    Bump {
        center: Vec<f64>,
        radius: f64,
        #[serde(default = "two")]
        smoothness: f64,
    },
}

fn two() -> f64 {
    2.0
}

impl FunctionSpec {
    pub fn to_core(&self) -> TestFunction {
        match self {
            Self::Constant { value } => TestFunction::Constant(*value),
            Self::Coordinate { exponents } => TestFunction::CoordinateProduct(exponents.clone()),
            Self::Bump { center, radius, smoothness } => {
                TestFunction::Bump { center: center.clone(), radius: *radius, smoothness: *smoothness }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSection {
    #[serde(default)]
    pub kind: MethodChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default = "default_refine")]
    pub max_refine: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_live")]
    pub max_live: usize,
}

fn default_refine() -> u32 {
    12
}

fn default_tol() -> f64 {
    1e-9
}

fn default_live() -> usize {
    4096
}

impl Default for MethodSection {
    fn default() -> Self {
        Self {
            kind: MethodChoice::Auto,
            search_radius: None,
            grid_step: None,
            max_refine: default_refine(),
            tol: default_tol(),
            max_live: default_live(),
        }
    }
}

impl MethodSection {
    pub fn envelope(&self) -> EnvelopeParams {
        EnvelopeParams {
            search_radius: self.search_radius,
            grid_step: self.grid_step,
            max_refine: self.max_refine,
            tol: self.tol,
            max_live: self.max_live,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    #[serde(default)]
    pub window: FitWindow,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_skew")]
    pub max_abs_skewness: f64,
    #[serde(default = "default_kurt")]
    pub max_abs_excess_kurtosis: f64,
    #[serde(default = "default_ks")]
    pub ks_coefficient: f64,
}

fn default_level() -> f64 {
    0.95
}

fn default_skew() -> f64 {
    NormalityThresholds::default().max_abs_skewness
}

fn default_kurt() -> f64 {
    NormalityThresholds::default().max_abs_excess_kurtosis
}

fn default_ks() -> f64 {
    NormalityThresholds::default().ks_coefficient
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            window: FitWindow::TopHalf,
            level: default_level(),
            max_abs_skewness: default_skew(),
            max_abs_excess_kurtosis: default_kurt(),
            ks_coefficient: default_ks(),
        }
    }
}

impl FitSection {
    pub fn options(&self) -> RunOptions {
        RunOptions {
            fit_window: self.window,
            level: self.level,
            thresholds: NormalityThresholds {
                max_abs_skewness: self.max_abs_skewness,
                max_abs_excess_kurtosis: self.max_abs_excess_kurtosis,
                ks_coefficient: self.ks_coefficient,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSection {
    /// Heights of the one-point curve.
    pub h_grid: Vec<f64>,
    /// Window of the limit process; defaults to the reach of the largest height plus the largest offset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_cap: Option<f64>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairSpec>,
    /// Gauss–Legendre nodes per panel for the limit constants.
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_nodes() -> usize {
    16
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub h1: f64,
    pub y2: Vec<f64>,
    pub h2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationSection {
    pub lambda: f64,
    /// Increasing radii in the sample's units; the last must cover the region.
    pub r_grid: Vec<f64>,
    /// Only points at least this far from the boundary are measured.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_margin() -> f64 {
    0.1
}

/// Reads and parses a configuration file.
pub fn load(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let field = field_from_parse_error(&message).unwrap_or_else(|| "config".to_string());
        ConfigError::new(field, message)
    })
}

fn field_from_parse_error(message: &str) -> Option<String> {
    for marker in ["missing field `", "unknown field `"] {
        if let Some(rest) = message.split(marker).nth(1) {
            return rest.split('`').next().map(str::to_string);
        }
    }
    None
}

pub fn to_toml(config: &ExperimentConfig) -> String {
    toml::to_string(config).expect("configuration serializes")
}

impl ExperimentConfig {
    pub fn psi(&self) -> PsiSpec {
        PsiSpec::PowerLaw { alpha: self.model.alpha }
    }

    pub fn functions(&self) -> Vec<TestFunction> {
        if self.functions.is_empty() {
            vec![TestFunction::Constant(1.0)]
        } else {
            self.functions.iter().map(FunctionSpec::to_core).collect()
        }
    }

    /// Method actually used: `maximal` forces the cone test, `birth-growth` the acceptance rule.
    pub fn method(&self) -> MethodChoice {
        match (self.experiment, self.method.kind) {
            (ExperimentKind::Maximal, MethodChoice::Auto) => MethodChoice::DownwardCone,
            (ExperimentKind::BirthGrowth, _) => MethodChoice::BirthGrowth,
            (_, m) => m,
        }
    }

    /// Density of the model; box regions carry `time_cap` (or 1 as a placeholder for the automatic cap).
    pub fn density(&self) -> Result<DensitySpec, ConfigError> {
        let m = &self.model;
        let spec = match &m.region {
            RegionSpec::Box { lo, hi } => {
                if lo.len() + 1 != m.d {
                    return Err(ConfigError::new(
                        "model.region",
                        format!("box needs d - 1 = {} bounds, got {}", m.d.saturating_sub(1), lo.len()),
                    ));
                }
                DensitySpec::new_box(lo.clone(), hi.clone(), m.rho0.to_core(), m.delta, m.time_cap.unwrap_or(1.0))
            }
            RegionSpec::Ball => DensitySpec::new_ball(m.d, m.rho0.to_core(), m.delta),
            RegionSpec::Shell { inner } => {
                let mut s = DensitySpec::new_ball(m.d, m.rho0.to_core(), m.delta)
                    .map_err(|e| ConfigError::from_core("model", e))?;
                s.region = psi_growth_core::sampling::SamplingRegion::SphereShell { d: m.d, inner: *inner };
                s.validate().map(|_| s)
            }
        };
        spec.map_err(|e| ConfigError::from_core("model", e))
    }

    pub fn scaling_experiment(&self) -> Result<ScalingExperiment, ConfigError> {
        let functional = match self.experiment {
            ExperimentKind::Hull => Functional::HullVertices,
            _ => Functional::Extremality { psi: self.psi(), method: self.method(), envelope: self.method.envelope() },
        };
        let exp = ScalingExperiment {
            density: self.density()?,
            functional,
            lambda_grid: self.grid.lambda.clone(),
            replicates: self.grid.replicates,
            functions: self.functions(),
            seed: self.seed,
            time_cap: match self.model.time_cap {
                Some(h) => TimeCap::Fixed(h),
                None => TimeCap::Auto,
            },
            sampling: self.model.sampling,
            options: self.fit.options(),
        };
        exp.validate().map_err(|e| match e {
            psi_growth_core::Error::Argument { field, reason } => {
                let section = match field {
                    "lambda_grid" => "grid.lambda".to_string(),
                    "replicates" => "grid.replicates".to_string(),
                    "method" => "method.kind".to_string(),
                    "functions" => "functions".to_string(),
                    other => format!("model.{other}"),
                };
                ConfigError::new(section, reason)
            }
            other => ConfigError::new("config", other.to_string()),
        })?;
        Ok(exp)
    }

    /// Schema and semantic checks without running anything.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.model;
        if m.d < 2 {
            return Err(ConfigError::new("model.d", format!("must be >= 2, got {}", m.d)));
        }
        compute_exponents(m.d, m.alpha, m.delta).map_err(|e| ConfigError::from_core("model", e))?;
        if self.workers == Some(0) {
            return Err(ConfigError::new("workers", "must be >= 1"));
        }
        let is_box = matches!(m.region, RegionSpec::Box { .. });
        match self.experiment {
            ExperimentKind::Scaling
            | ExperimentKind::Clt
            | ExperimentKind::Maximal
            | ExperimentKind::BirthGrowth
            | ExperimentKind::Hull => {
                if self.experiment == ExperimentKind::Hull && is_box {
                    return Err(ConfigError::new("model.region", "hull experiments sample a ball or shell"));
                }
                if self.experiment != ExperimentKind::Hull && !is_box {
                    return Err(ConfigError::new("model.region", "extremality experiments sample a box"));
                }
                self.scaling_experiment()?;
            }
            ExperimentKind::Depoissonize => {
                if !is_box {
                    return Err(ConfigError::new("model.region", "the comparison samples a box"));
                }
                if !(m.alpha <= 1.0) {
                    return Err(ConfigError::new(
                        "model.alpha",
                        "the comparison uses the cone test and needs alpha <= 1",
                    ));
                }
                let n = &self.grid.n;
                if n.is_empty() || n[0] == 0 || n.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(ConfigError::new("grid.n", "must be a nonempty increasing list of positive sizes"));
                }
                if self.grid.replicates < 2 {
                    return Err(ConfigError::new("grid.replicates", "need at least 2 replicates"));
                }
                self.density()?;
                if self.functions.len() > 1 {
                    return Err(ConfigError::new("functions", "the comparison uses a single test function"));
                }
                if let Some(f) = self.functions.first() {
                    f.to_core().validate(m.d - 1).map_err(|e| ConfigError::from_core("functions", e).strip())?;
                }
            }
            ExperimentKind::Correlation => {
                let Some(c) = &self.correlation else {
                    return Err(ConfigError::new("correlation", "section is required for correlation experiments"));
                };
                if c.h_grid.is_empty()
                    || c.h_grid.iter().any(|h| !(*h >= 0.0))
                    || c.h_grid.windows(2).any(|w| w[1] <= w[0])
                {
                    return Err(ConfigError::new(
                        "correlation.h_grid",
                        "must be a nonempty increasing list of heights >= 0",
                    ));
                }
                if c.replicates < 2 {
                    return Err(ConfigError::new("correlation.replicates", "need at least 2 replicates"));
                }
                if c.nodes < 2 {
                    return Err(ConfigError::new("correlation.nodes", "need at least 2 nodes"));
                }
                for (name, v) in [("window_radius", c.window_radius), ("time_cap", c.time_cap)] {
                    if let Some(v) = v {
                        if !(v > 0.0) || !v.is_finite() {
                            return Err(ConfigError::new(format!("correlation.{name}"), "must be > 0"));
                        }
                    }
                }
                for p in &c.pairs {
                    if p.y2.len() + 1 != m.d {
                        return Err(ConfigError::new(
                            "correlation.pairs.y2",
                            format!("expected {} coordinates", m.d - 1),
                        ));
                    }
                    if !(p.h1 >= 0.0) || !(p.h2 >= 0.0) {
                        return Err(ConfigError::new("correlation.pairs", "heights must be >= 0"));
                    }
                }
            }
            ExperimentKind::Localization => {
                let Some(l) = &self.localization else {
                    return Err(ConfigError::new("localization", "section is required for localization experiments"));
                };
                if !is_box {
                    return Err(ConfigError::new("model.region", "localization runs sample a box"));
                }
                self.density()?;
                if !(l.lambda > 0.0) || !l.lambda.is_finite() {
                    return Err(ConfigError::new("localization.lambda", "must be > 0"));
                }
                let g = &l.r_grid;
                if g.is_empty() || !(g[0] > 0.0) || g.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(ConfigError::new(
                        "localization.r_grid",
                        "must be a nonempty increasing list of positive radii",
                    ));
                }
                if let RegionSpec::Box { lo, hi } = &m.region {
                    let diag = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
                    if g[g.len() - 1] < diag {
                        return Err(ConfigError::new(
                            "localization.r_grid",
                            format!("largest radius must cover the region diameter {diag}"),
                        ));
                    }
                }
                if !(l.margin >= 0.0) {
                    return Err(ConfigError::new("localization.margin", "must be >= 0"));
                }
                if self.grid.replicates == 0 {
                    return Err(ConfigError::new("grid.replicates", "need at least one configuration"));
                }
                if m.alpha > 1.0 && self.method.kind == MethodChoice::DownwardCone {
                    return Err(ConfigError::new("method.kind", "the downward-cone test is exact only for alpha <= 1"));
                }
            }
        }
        Ok(())
    }
}

impl ConfigError {
    fn strip(self) -> Self {
        match self.field.strip_prefix("functions.") {
            Some(_) => Self::new("functions", self.message),
            None => self,
        }
    }
}
