use alloc::vec;
use alloc::vec::Vec;

use super::functions::pairwise_sum;
use crate::math::{self, sqrt};
use crate::special::normal_cdf;

/// Mean and variance of a sample with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub var: f64,
    pub se_mean: f64,
    /// Large-sample standard error of the variance, `sqrt((m4 − var²)/n)`.
    pub se_var: f64,
}

pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    if n == 0 {
        return Summary { n, mean: f64::NAN, var: f64::NAN, se_mean: f64::NAN, se_var: f64::NAN };
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return Summary { n, mean, var: 0.0, se_mean: f64::NAN, se_var: f64::NAN };
    }
    let dev2: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let m2 = pairwise_sum(&dev2) / n as f64;
    let m4 = pairwise_sum(&dev2.iter().map(|v| v * v).collect::<Vec<_>>()) / n as f64;
    let var = m2 * n as f64 / (n - 1) as f64;
    Summary { n, mean, var, se_mean: sqrt(var / n as f64), se_var: sqrt(((m4 - m2 * m2) / n as f64).max(0.0)) }
}

/// Unbiased covariance matrix of the columns `samples[f][r]`.
pub fn covariance_matrix(samples: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = samples.len();
    let means: Vec<f64> = samples.iter().map(|s| pairwise_sum(s) / s.len() as f64).collect();
    let mut cov = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let n = samples[a].len();
            let prods: Vec<f64> =
                samples[a].iter().zip(&samples[b]).map(|(x, y)| (x - means[a]) * (y - means[b])).collect();
            let c = if n > 1 { pairwise_sum(&prods) / (n - 1) as f64 } else { 0.0 };
            cov[a][b] = c;
            cov[b][a] = c;
        }
    }
    cov
}

/// Pearson correlation with a Fisher-z confidence interval at two-sided level `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Correlation {
    pub r: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn correlation(a: &[f64], b: &[f64], z_crit: f64) -> Correlation {
    let cov = covariance_matrix(&[a.to_vec(), b.to_vec()]);
    let r = cov[0][1] / sqrt(cov[0][0] * cov[1][1]);
    let n = a.len() as f64;
    let se_z = 1.0 / sqrt((n - 3.0).max(1.0));
    let z = libm::atanh(r.clamp(-0.999_999_999, 0.999_999_999));
    Correlation {
        r,
        se: (1.0 - r * r) / sqrt((n - 1.0).max(1.0)),
        ci_low: libm::tanh(z - z_crit * se_z),
        ci_high: libm::tanh(z + z_crit * se_z),
    }
}

/// Bias-corrected skewness G1.
pub fn skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (m2, m3, _) = central_moments(xs);
    let g1 = m3 / math::powf(m2, 1.5);
    g1 * sqrt(n * (n - 1.0)) / (n - 2.0)
}

/// Bias-corrected excess kurtosis G2.
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (m2, _, m4) = central_moments(xs);
    let g2 = m4 / (m2 * m2) - 3.0;
    ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0))
}

fn central_moments(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    let d: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let m2 = pairwise_sum(&d.iter().map(|v| v * v).collect::<Vec<_>>()) / n;
    let m3 = pairwise_sum(&d.iter().map(|v| v * v * v).collect::<Vec<_>>()) / n;
    let m4 = pairwise_sum(&d.iter().map(|v| v * v * v * v).collect::<Vec<_>>()) / n;
    (m2, m3, m4)
}

/// Kolmogorov–Smirnov distance between the empirical law of `xs` and N(0, 1).
pub fn ks_normal(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// `(x − mean)/sd` with the sample mean and standard deviation.
pub fn standardize(xs: &[f64]) -> Vec<f64> {
    let s = summarize(xs);
    let sd = sqrt(s.var);
    if !(sd > 0.0) {
        return vec![0.0; xs.len()];
    }
    xs.iter().map(|x| (x - s.mean) / sd).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalityThresholds {
    pub max_abs_skewness: f64,
    pub max_abs_excess_kurtosis: f64,
    /// KS threshold is `ks_coefficient / sqrt(n)`.
    pub ks_coefficient: f64,
}

impl Default for NormalityThresholds {
    fn default() -> Self {
        Self { max_abs_skewness: 0.15, max_abs_excess_kurtosis: 0.3, ks_coefficient: 1.36 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalityReport {
    pub n: usize,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
    pub ks_threshold: f64,
    pub pass: bool,
}

/// Moment and KS diagnostics of an already standardized sample.
pub fn normality_diagnostics(standardized: &[f64], thresholds: &NormalityThresholds) -> NormalityReport {
    let n = standardized.len();
    let skewness = skewness(standardized);
    let excess_kurtosis = excess_kurtosis(standardized);
    let ks = ks_normal(standardized);
    let ks_threshold = thresholds.ks_coefficient / sqrt(n as f64);
    let pass = skewness.abs() < thresholds.max_abs_skewness
        && excess_kurtosis.abs() < thresholds.max_abs_excess_kurtosis
        && ks < ks_threshold;
    NormalityReport { n, skewness, excess_kurtosis, ks, ks_threshold, pass }
}
