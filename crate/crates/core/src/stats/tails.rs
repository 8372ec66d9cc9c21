//! Tail summaries: survival of localization radii and envelope fits for decaying curves.

use alloc::format;
use alloc::vec::Vec;

use super::experiment::replicate_seed;
use super::regression::linear_fit;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::extremality::{localization_radius, EnvelopeParams};
use crate::geometry::{compute_exponents, PsiSpec};
use crate::math::{exp, log, powf};
use crate::sampling::{sample_poisson_box, DensitySpec, SamplingRegion};

/// Empirical `P[R > L]` at each grid value.
pub fn survival_curve(samples: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = samples.len() as f64;
    grid.iter().map(|l| samples.iter().filter(|r| **r > *l).count() as f64 / n).collect()
}

/// Localization radii of the points of Poisson box samples whose location is at
/// least `margin` away from the boundary, in the rescaled unit `λ^β · r`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalizationSample {
    pub lambda: f64,
    pub scale: f64,
    /// Rescaled radii; infinite when the largest grid radius disagrees.
    pub radii: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn localization_sample(
    density: &DensitySpec,
    psi: &PsiSpec,
    lambda: f64,
    r_grid: &[f64],
    margin: f64,
    configs: usize,
    seed: u64,
    params: &EnvelopeParams,
    exec: &impl Executor,
) -> Result<LocalizationSample> {
    let SamplingRegion::Box { lo, hi } = &density.region else {
        return Err(Error::arg("region", "localization runs sample a box"));
    };
    if configs == 0 {
        return Err(Error::arg("replicates", "need at least one configuration"));
    }
    let exps = compute_exponents(density.d(), psi.alpha_at_zero(), density.delta)?;
    let scale = powf(lambda, exps.beta);
    let per_config = exec.map_indexed(configs, |c| -> Result<Vec<f64>> {
        let cfg = sample_poisson_box(density, lambda, replicate_seed(seed, 0, c))?;
        let mut out = Vec::new();
        for i in 0..cfg.len() {
            let inside = cfg.x(i).iter().zip(lo).zip(hi).all(|((v, a), b)| v - a >= margin && b - v >= margin);
            if inside {
                out.push(scale * localization_radius(&cfg, psi, i, r_grid, params)?);
            }
        }
        Ok(out)
    });
    let mut radii = Vec::new();
    for r in per_config {
        radii.extend(r?);
    }
    Ok(LocalizationSample { lambda, scale, radii })
}

/// `log y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentialEnvelope {
    pub intercept: f64,
    pub slope: f64,
}

impl ExponentialEnvelope {
    pub fn eval(&self, x: f64) -> f64 {
        exp(self.intercept + self.slope * x)
    }
}

/// Least-squares exponential through the positive points `(x, y)`.
pub fn fit_exponential(x: &[f64], y: &[f64]) -> Result<ExponentialEnvelope> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = x.iter().zip(y).filter(|(_, v)| **v > 0.0).map(|(a, v)| (*a, log(*v))).unzip();
    if xs.len() < 2 {
        return Err(Error::arg("fit", format!("need two positive values, got {}", xs.len())));
    }
    let f = linear_fit(&xs, &ys, 0.95)?;
    Ok(ExponentialEnvelope { intercept: f.intercept, slope: f.slope })
}

/// Smallest `C` with `C · exp(−x/C) >= y` at every point, returned as an envelope.
pub fn dominating_exponential(x: &[f64], y: &[f64]) -> Result<ExponentialEnvelope> {
    if x.is_empty() || x.len() != y.len() || x.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::arg("fit", "need matching nonnegative abscissae"));
    }
    // C · exp(−x/C) increases in C, so the constraint holds on an interval [C*, ∞).
    let covers = |c: f64| x.iter().zip(y).all(|(a, v)| c * exp(-a / c) >= *v);
    let (mut lo, mut hi) = (1e-12, 1.0);
    while !covers(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::arg("fit", "no finite constant dominates the data"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if covers(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // `eval` goes through exp(ln C − x/C), which can round below the bisection bound.
    loop {
        let env = ExponentialEnvelope { intercept: log(hi), slope: -1.0 / hi };
        if x.iter().zip(y).all(|(a, v)| env.eval(*a) >= *v) {
            return Ok(env);
        }
        hi *= 1.0 + 1e-12;
    }
}

/// Rate `c` of `exp(−c · h^power)` fitted by least squares through the origin of
/// `−log m` against `h^power`, using the points with `m > 0`.
pub fn fit_stretched_rate(h: &[f64], m: &[f64], power: f64) -> Result<f64> {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, v) in h.iter().zip(m) {
        if *v > 0.0 && *a > 0.0 {
            let x = powf(*a, power);
            sxy += x * -log(*v);
            sxx += x * x;
        }
    }
    if !(sxx > 0.0) {
        return Err(Error::arg("fit", "need a positive value at a positive height"));
    }
    Ok(sxy / sxx)
}
