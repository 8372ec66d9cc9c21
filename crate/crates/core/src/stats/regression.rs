use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{log, sqrt};
use crate::special::student_t_quantile;

/// Least-squares fit of `log y = intercept + slope · log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub se_slope: f64,
    /// Two-sided t interval for the slope.
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: usize,
}

/// Which grid points enter the fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FitWindow {
    /// The upper half of the grid (indices `n/2..n`).
    #[default]
    TopHalf,
    All,
}

impl FitWindow {
    pub fn range(self, n: usize) -> core::ops::Range<usize> {
        match self {
            FitWindow::TopHalf => n / 2..n,
            FitWindow::All => 0..n,
        }
    }
}

pub fn fit_loglog(x: &[f64], y: &[f64], level: f64) -> Result<LogLogFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::arg("fit", "need at least two (x, y) pairs of equal length"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::arg("fit", "log-log fit needs positive values"));
    }
    let lx: Vec<f64> = x.iter().map(|v| log(*v)).collect();
    let ly: Vec<f64> = y.iter().map(|v| log(*v)).collect();
    linear_fit(&lx, &ly, level)
}

/// Ordinary least squares `y = intercept + slope · x` with a t interval for the slope.
pub fn linear_fit(x: &[f64], y: &[f64], level: f64) -> Result<LogLogFit> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return Err(Error::arg("fit", "need at least two pairs of equal length"));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::arg("fit", "x values must not all coincide"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if n == 2 {
        return Ok(LogLogFit {
            slope,
            intercept,
            se_slope: f64::INFINITY,
            ci_low: f64::NEG_INFINITY,
            ci_high: f64::INFINITY,
            points: n,
        });
    }
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a) * (b - intercept - slope * a)).sum();
    let se_slope = sqrt(rss / (nf - 2.0) / sxx);
    let t = student_t_quantile(0.5 + level / 2.0, nf - 2.0);
    Ok(LogLogFit { slope, intercept, se_slope, ci_low: slope - t * se_slope, ci_high: slope + t * se_slope, points: n })
}
