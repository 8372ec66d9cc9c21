//! Float routines backed by `libm`, so results are identical with and without `std`.

pub use libm::{acos, atan2, cos, erfc, exp, fabs as abs, floor, lgamma, log, pow as powf, sin, sqrt};

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    let mut acc = 1.0;
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sqrt(dist2(a, b))
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub const PI: f64 = core::f64::consts::PI;

/// Surface area of the unit sphere S^{k-1} in ℝ^k (k = 1 gives 2, the two endpoints of [-1,1]).
pub fn unit_sphere_area(k: usize) -> f64 {
    let half = k as f64 / 2.0;
    2.0 * powf(PI, half) / exp(lgamma(half))
}

/// Volume of the unit ball in ℝ^k.
pub fn unit_ball_volume(k: usize) -> f64 {
    unit_sphere_area(k) / k as f64
}
