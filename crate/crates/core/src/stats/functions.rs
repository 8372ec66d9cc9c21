use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::PointConfiguration;
use crate::math;

/// Bounded continuous test functions of the spatial coordinates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TestFunction {
    Constant(f64),
    /// `Π x_k^{e_k}`; missing exponents count as zero.
    CoordinateProduct(Vec<u32>),
    /// `(1 − |x − center|²/radius²)^smoothness` inside the ball, zero outside.
    Bump {
        center: Vec<f64>,
        radius: f64,
        smoothness: f64,
    },
}

impl TestFunction {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            TestFunction::Constant(c) if !c.is_finite() => Err(Error::arg("functions", "constant must be finite")),
            TestFunction::CoordinateProduct(e) if e.len() > dim => {
                Err(Error::arg("functions", format!("{} exponents for {dim} coordinates", e.len())))
            }
            TestFunction::Bump { center, radius, smoothness } => {
                if center.len() != dim {
                    return Err(Error::arg("functions", format!("bump center needs {dim} coordinates")));
                }
                if !(*radius > 0.0) || !(*smoothness > 0.0) {
                    return Err(Error::arg("functions", "bump radius and smoothness must be > 0"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Constant(c) => *c,
            TestFunction::CoordinateProduct(e) => e.iter().zip(x).map(|(&k, &v)| math::powi(v, k as i32)).product(),
            TestFunction::Bump { center, radius, smoothness } => {
                let s = math::dist2(x, center) / (radius * radius);
                if s >= 1.0 {
                    0.0
                } else if *smoothness == 1.0 {
                    1.0 - s
                } else {
                    math::powf(1.0 - s, *smoothness)
                }
            }
        }
    }

    /// Whether the support lies in the interior of the box `[lo, hi]`.
    pub fn is_interior(&self, lo: &[f64], hi: &[f64]) -> bool {
        match self {
            TestFunction::Bump { center, radius, .. } => {
                center.iter().zip(lo).zip(hi).all(|((c, a), b)| c - radius > *a && c + radius < *b)
            }
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Constant(c) => format!("const({c})"),
            TestFunction::CoordinateProduct(e) => format!("coord{e:?}"),
            TestFunction::Bump { center, radius, smoothness } => format!("bump({center:?},{radius},{smoothness})"),
        }
    }
}

/// `Σ_i flag(i) f(x_i)`.
pub fn empirical_pairing(config: &PointConfiguration, flags: &[bool], f: &TestFunction) -> Result<f64> {
    if flags.len() != config.len() {
        return Err(Error::arg("flags", format!("{} flags for {} points", flags.len(), config.len())));
    }
    Ok(pairwise_sum(
        (0..config.len()).filter(|&i| flags[i]).map(|i| f.eval(config.x(i))).collect::<Vec<_>>().as_slice(),
    ))
}

/// Pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
