//! Special functions and quadrature rules.

use alloc::vec::Vec;

use crate::math::{abs, cos, erfc, exp, lgamma, log, powf, PI};

pub fn ln_beta(a: f64, b: f64) -> f64 {
    lgamma(a) + lgamma(b) - lgamma(a + b)
}

/// Regularized incomplete beta function I_x(a, b).
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = exp(a * log(x) + b * log(1.0 - x) - ln_beta(a, b));
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if abs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if abs(del - 1.0) < 1e-15 {
            break;
        }
    }
    h
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / core::f64::consts::SQRT_2)
}

/// CDF of Student's t with `nu` degrees of freedom.
pub fn student_t_cdf(t: f64, nu: f64) -> f64 {
    let tail = 0.5 * beta_reg(nu / 2.0, 0.5, nu / (nu + t * t));
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Quantile of Student's t (bisection on the CDF).
pub fn student_t_quantile(p: f64, nu: f64) -> f64 {
    let (mut lo, mut hi) = (-1e3, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if student_t_cdf(mid, nu) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for i in 0..n {
        let mut z = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if abs(dz) < 1e-15 {
                break;
            }
        }
        nodes.push(mid - half * z);
        weights.push(2.0 * half / ((1.0 - z * z) * dp * dp));
    }
    (nodes, weights)
}

/// ∫₀¹ s^{k-1} (1 − s^α)^{1+δ} ds written through the beta function.
pub fn cone_profile_integral(k: usize, alpha: f64, delta: f64) -> f64 {
    exp(ln_beta(k as f64 / alpha, 2.0 + delta)) / alpha
}

/// Mass of the downward cone `{(z,t): 0 <= t <= h − |z|^α}` in ℝ^k × ℝ₊ under `t^δ dz dt`.
pub fn downward_cone_mass(k: usize, alpha: f64, delta: f64, h: f64) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    let area = crate::math::unit_sphere_area(k);
    let expo = k as f64 / alpha + 1.0 + delta;
    area / (1.0 + delta) * cone_profile_integral(k, alpha, delta) * powf(h, expo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_beta_known_values() {
        // I_x(1,1) = x, I_x(2,1) = x², I_x(1,2) = 1 − (1−x)².
        for &x in &[0.1, 0.37, 0.8] {
            assert!((beta_reg(1.0, 1.0, x) - x).abs() < 1e-13);
            assert!((beta_reg(2.0, 1.0, x) - x * x).abs() < 1e-13);
            assert!((beta_reg(1.0, 2.0, x) - (1.0 - (1.0 - x) * (1.0 - x))).abs() < 1e-13);
        }
        assert!((beta_reg(2.5, 3.5, 0.4) + beta_reg(3.5, 2.5, 0.6) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn t_quantiles() {
        assert!((student_t_quantile(0.975, 2.0) - 4.302652729911275).abs() < 1e-6);
        assert!((student_t_quantile(0.975, 1e6) - 1.959963984540054).abs() < 1e-4);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6, 0.0, 2.0);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(11)).sum();
        assert!((s - 2f64.powi(12) / 12.0).abs() < 1e-9);
    }

    #[test]
    fn cone_mass_closed_forms() {
        // d = 2, α = 1, δ = 0: the triangle of height h has area h².
        assert!((downward_cone_mass(1, 1.0, 0.0, 0.7) - 0.49).abs() < 1e-14);
        // d = 3, α = 1, δ = 0: a circular cone of height h, volume π h³ / 3.
        assert!((downward_cone_mass(2, 1.0, 0.0, 1.3) - PI * 1.3f64.powi(3) / 3.0).abs() < 1e-12);
        // d = 2, α = 2, δ = 1: ∫_{-√h}^{√h} (h − z²)²/2 dz = 8 h^{5/2} / 15.
        let h: f64 = 0.8;
        assert!((downward_cone_mass(1, 2.0, 1.0, h) - 8.0 * h.powf(2.5) / 15.0).abs() < 1e-13);
    }
}
