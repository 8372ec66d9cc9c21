//! Correlation functions of the limit process and the limit integrals built on them.
//!
//! For power laws with `α <= 1` a planted point is extremal iff its downward cone is
//! empty, so the one-point function is `exp(−M(h))` with `M` the cone mass and the
//! two-point function follows from the mass of the intersection of two cones. These
//! closed forms and the Monte Carlo estimators are both exposed as a
//! [`CorrelationSource`], so the limit integrals can be computed either way.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::functions::TestFunction;
use super::moments::summarize;
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::extremality::envelope::envelope_point;
use crate::extremality::EnvelopeParams;
use crate::geometry::{PointConfiguration, PsiSpec};
use crate::math::{self, exp, powf, sqrt};
use crate::rng::derive_seed;
use crate::sampling::{sample_limit_process, tensor_quadrature, Rho0};
use crate::special::{beta_reg, downward_cone_mass, gauss_legendre};

/// Monte Carlo value with its standard error.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub value: f64,
    pub se: f64,
    pub replicates: usize,
    /// Envelope searches that ended without a certificate.
    pub unresolved: usize,
    /// Truncation checks that failed.
    pub warnings: Vec<String>,
}

/// The limit process `h^δ dx dh` on `B_{d−1}(0, window_radius) × [0, time_cap]` with a power-law profile.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitSetup {
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    pub window_radius: f64,
    pub time_cap: f64,
    pub envelope: EnvelopeParams,
    /// Largest tolerated probability that truncation changes a convex-profile flag.
    pub bias_budget: f64,
}

impl LimitSetup {
    pub fn new(d: usize, alpha: f64, delta: f64, window_radius: f64, time_cap: f64) -> Result<Self> {
        let s =
            Self { d, alpha, delta, window_radius, time_cap, envelope: EnvelopeParams::default(), bias_budget: 1e-6 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::arg("d", format!("must be >= 2, got {}", self.d)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::arg("alpha", format!("must be > 0, got {}", self.alpha)));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::arg("delta", format!("must be >= 0, got {}", self.delta)));
        }
        if !(self.window_radius > 0.0) || !self.window_radius.is_finite() {
            return Err(Error::arg("window_radius", "must be > 0"));
        }
        if !(self.time_cap > 0.0) || !self.time_cap.is_finite() {
            return Err(Error::arg("time_cap", "must be > 0"));
        }
        self.envelope.validate()
    }

    fn psi(&self) -> PsiSpec {
        PsiSpec::PowerLaw { alpha: self.alpha }
    }

    fn cone_exact(&self) -> bool {
        self.alpha <= 1.0
    }

    /// Spatial reach `h^{1/α}` of a downward cone with apex height `h`.
    fn reach(&self, h: f64) -> f64 {
        powf(h.max(0.0), 1.0 / self.alpha)
    }

    /// Warnings for a planted point at spatial distance `offset` from the origin and height `h`.
    fn truncation_warnings(&self, offset: f64, h: f64, out: &mut Vec<String>) {
        if h > self.time_cap {
            out.push(format!("planted height {h} exceeds time_cap {}", self.time_cap));
        }
        if offset + self.reach(h) > self.window_radius {
            out.push(format!(
                "downward cone of the planted point at height {h} leaves the window of radius {}",
                self.window_radius
            ));
        }
        if !self.cone_exact() {
            let k = self.d - 1;
            let depth = self.time_cap.min(powf(self.window_radius - offset, self.alpha).max(0.0));
            let miss = exp(-downward_cone_mass(k, self.alpha, self.delta, depth));
            if miss > self.bias_budget {
                out.push(format!(
                    "window misses covering mass with probability {miss:.3e} > budget {:.1e}",
                    self.bias_budget
                ));
            }
        }
    }

    fn sample(&self, seed: u64) -> Result<PointConfiguration> {
        sample_limit_process(self.d, self.delta, self.window_radius, self.time_cap, seed)
    }
}

/// Flag of the point at index `p`; the second value reports a missing certificate.
fn planted_flag(setup: &LimitSetup, psi: &PsiSpec, config: &PointConfiguration, p: usize) -> (bool, bool) {
    if setup.cone_exact() {
        let (x, h) = (config.x(p), config.h(p));
        let covered =
            (0..config.len()).any(|j| j != p && config.h(j) <= h - psi.eval_unchecked(math::dist(x, config.x(j))));
        return (!covered, false);
    }
    let outcome = envelope_point(config, psi, &setup.envelope, p);
    (outcome.flag(), matches!(outcome, crate::extremality::envelope::Outcome::Unresolved { .. }))
}

fn with_planted(base: &PointConfiguration, planted: &[(&[f64], f64)]) -> Result<PointConfiguration> {
    let mut c = base.clone();
    for (x, h) in planted {
        c.push(x, *h)?;
    }
    Ok(c)
}

fn replicate_seed(root: u64, r: usize) -> u64 {
    derive_seed(root, &[r as u64], "limit-process")
}

/// Probability that `(0, h)` is extremal in the limit process.
///
/// Replicate seeds do not depend on `h`, so curves over a grid of heights use
/// common random numbers.
pub fn estimate_one_point_correlation(
    setup: &LimitSetup,
    h: f64,
    replicates: usize,
    seed: u64,
    exec: &impl Executor,
) -> Result<McEstimate> {
    setup.validate()?;
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::arg("h", format!("must be >= 0, got {h}")));
    }
    if replicates < 2 {
        return Err(Error::arg("replicates", "need at least 2 replicates"));
    }
    let mut warnings = Vec::new();
    setup.truncation_warnings(0.0, h, &mut warnings);
    let psi = setup.psi();
    let origin = vec![0.0; setup.d - 1];
    let draws = exec.map_indexed(replicates, |r| -> Result<(f64, bool)> {
        let base = setup.sample(replicate_seed(seed, r))?;
        let config = with_planted(&base, &[(&origin, h)])?;
        let (flag, unresolved) = planted_flag(setup, &psi, &config, base.len());
        Ok((if flag { 1.0 } else { 0.0 }, unresolved))
    });
    let mut values = Vec::with_capacity(replicates);
    let mut unresolved = 0;
    for d in draws {
        let (v, u) = d?;
        values.push(v);
        unresolved += u as usize;
    }
    let s = summarize(&values);
    Ok(McEstimate { value: s.mean, se: s.se_mean, replicates, unresolved, warnings })
}

/// Covariance of the extremality indicators of `(0, h1)` and `(y2, h2)` planted together.
///
/// Every replicate evaluates the joint term and both single terms on the same draw.
/// The standard error comes from the influence function of
/// `mean(joint) − mean(first)·mean(second)`.
pub fn estimate_two_point_correlation(
    setup: &LimitSetup,
    h1: f64,
    y2: &[f64],
    h2: f64,
    replicates: usize,
    seed: u64,
    exec: &impl Executor,
) -> Result<McEstimate> {
    setup.validate()?;
    if y2.len() != setup.d - 1 {
        return Err(Error::arg("y2", format!("expected {} coordinates", setup.d - 1)));
    }
    for (name, h) in [("h1", h1), ("h2", h2)] {
        if !(h >= 0.0) || !h.is_finite() {
            return Err(Error::arg(name, format!("must be >= 0, got {h}")));
        }
    }
    if replicates < 2 {
        return Err(Error::arg("replicates", "need at least 2 replicates"));
    }
    let mut warnings = Vec::new();
    setup.truncation_warnings(0.0, h1, &mut warnings);
    setup.truncation_warnings(math::norm(y2), h2, &mut warnings);
    let psi = setup.psi();
    let origin = vec![0.0; setup.d - 1];
    let draws = exec.map_indexed(replicates, |r| -> Result<([f64; 3], usize)> {
        let base = setup.sample(replicate_seed(seed, r))?;
        let n = base.len();
        let both = with_planted(&base, &[(&origin, h1), (y2, h2)])?;
        let (a1, u1) = planted_flag(setup, &psi, &both, n);
        let (a2, u2) = planted_flag(setup, &psi, &both, n + 1);
        let (b, u3) = planted_flag(setup, &psi, &with_planted(&base, &[(&origin, h1)])?, n);
        let (c, u4) = planted_flag(setup, &psi, &with_planted(&base, &[(y2, h2)])?, n);
        let ind = |f: bool| if f { 1.0 } else { 0.0 };
        Ok(([ind(a1 && a2), ind(b), ind(c)], [u1, u2, u3, u4].iter().filter(|u| **u).count()))
    });
    let mut cols = [Vec::with_capacity(replicates), Vec::with_capacity(replicates), Vec::with_capacity(replicates)];
    let mut unresolved = 0;
    for d in draws {
        let (v, u) = d?;
        for (c, x) in cols.iter_mut().zip(v) {
            c.push(x);
        }
        unresolved += u;
    }
    let n = replicates as f64;
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    let value = means[0] - means[1] * means[2];
    let influence: Vec<f64> =
        (0..replicates).map(|r| cols[0][r] - means[2] * cols[1][r] - means[1] * cols[2][r]).collect();
    let se = sqrt(summarize(&influence).var / n);
    Ok(McEstimate { value, se, replicates, unresolved, warnings })
}

/// One- and two-point correlation functions of the limit process with a power-law profile.
pub trait CorrelationSource: Sync {
    fn d(&self) -> usize;
    fn alpha(&self) -> f64;
    fn delta(&self) -> f64;
    /// One-point function at height `h` with its standard error (zero when exact).
    fn one_point(&self, h: f64) -> Result<(f64, f64)>;
    /// Two-point function at heights `h1`, `h2` and spatial separation `r`.
    fn two_point(&self, h1: f64, r: f64, h2: f64) -> Result<(f64, f64)>;
}

/// Closed forms through cone masses; exact for `α <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeAnalytic {
    d: usize,
    alpha: f64,
    delta: f64,
    /// Gauss–Legendre nodes per panel of the intersection integral.
    pub nodes: usize,
}

impl ConeAnalytic {
    pub fn new(d: usize, alpha: f64, delta: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::arg("d", "must be >= 2"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Method(format!(
                "closed-form correlations need a concave power law (alpha <= 1), got alpha = {alpha}"
            )));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::arg("delta", "must be >= 0"));
        }
        Ok(Self { d, alpha, delta, nodes: 16 })
    }

    fn mass(&self, h: f64) -> f64 {
        downward_cone_mass(self.d - 1, self.alpha, self.delta, h)
    }

    /// Mass of the intersection of the downward cones of `(0, h1)` and `(y, h2)` with `|y| = r`.
    pub fn intersection_mass(&self, h1: f64, r: f64, h2: f64) -> f64 {
        let k = self.d - 1;
        let top = h1.min(h2);
        if top <= 0.0 {
            return 0.0;
        }
        let reach = |h: f64, t: f64| powf((h - t).max(0.0), 1.0 / self.alpha);
        // Radii sum decreases in t; past `stop` the sections are disjoint.
        let stop = if reach(h1, 0.0) + reach(h2, 0.0) <= r {
            return 0.0;
        } else {
            let (mut lo, mut hi) = (0.0, top);
            if reach(h1, hi) + reach(h2, hi) > r {
                hi
            } else {
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if reach(h1, mid) + reach(h2, mid) > r {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        };
        let panels = 4;
        let mut total = 0.0;
        for p in 0..panels {
            let a = stop * p as f64 / panels as f64;
            let b = stop * (p + 1) as f64 / panels as f64;
            let (x, w) = gauss_legendre(self.nodes, a, b);
            for (t, w) in x.iter().zip(&w) {
                total += w * powf(*t, self.delta) * lens_volume(k, reach(h1, *t), reach(h2, *t), r);
            }
        }
        total
    }
}

impl CorrelationSource for ConeAnalytic {
    fn d(&self) -> usize {
        self.d
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn delta(&self) -> f64 {
        self.delta
    }

    fn one_point(&self, h: f64) -> Result<(f64, f64)> {
        Ok((exp(-self.mass(h)), 0.0))
    }

    fn two_point(&self, h1: f64, r: f64, h2: f64) -> Result<(f64, f64)> {
        let (m1, m2) = (self.mass(h1), self.mass(h2));
        let apart = exp(-m1 - m2);
        // Both extremal iff neither lies in the other's closed downward cone.
        if powf(r, self.alpha) > (h1 - h2).abs() {
            Ok((exp(-m1 - m2 + self.intersection_mass(h1, r, h2)) - apart, 0.0))
        } else {
            Ok((-apart, 0.0))
        }
    }
}

/// Volume of `B(0, a) ∩ B(y, b)` in ℝ^k with `|y| = r`.
pub fn lens_volume(k: usize, a: f64, b: f64, r: f64) -> f64 {
    if a <= 0.0 || b <= 0.0 || r >= a + b {
        return 0.0;
    }
    if r <= (a - b).abs() {
        return math::unit_ball_volume(k) * powf(a.min(b), k as f64);
    }
    let c1 = (r * r + a * a - b * b) / (2.0 * r);
    cap_volume(k, a, a - c1) + cap_volume(k, b, b - (r - c1))
}

/// Volume of the cap of height `t ∈ [0, 2R]` cut from a k-ball of radius `R`.
fn cap_volume(k: usize, radius: f64, t: f64) -> f64 {
    let full = math::unit_ball_volume(k) * powf(radius, k as f64);
    let t = t.clamp(0.0, 2.0 * radius);
    if t > radius {
        return full - cap_volume(k, radius, 2.0 * radius - t);
    }
    let x = ((2.0 * radius * t - t * t) / (radius * radius)).clamp(0.0, 1.0);
    0.5 * full * beta_reg((k as f64 + 1.0) / 2.0, 0.5, x)
}

/// Monte Carlo correlations on a limit-process window; the second point is placed on the first axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSource {
    pub setup: LimitSetup,
    pub replicates: usize,
    pub seed: u64,
}

impl CorrelationSource for MonteCarloSource {
    fn d(&self) -> usize {
        self.setup.d
    }

    fn alpha(&self) -> f64 {
        self.setup.alpha
    }

    fn delta(&self) -> f64 {
        self.setup.delta
    }

    fn one_point(&self, h: f64) -> Result<(f64, f64)> {
        let e = estimate_one_point_correlation(&self.setup, h, self.replicates, self.seed, &Sequential)?;
        Ok((e.value, e.se))
    }

    fn two_point(&self, h1: f64, r: f64, h2: f64) -> Result<(f64, f64)> {
        let mut y = vec![0.0; self.setup.d - 1];
        y[0] = r;
        let seed = derive_seed(self.seed, &[h1.to_bits(), r.to_bits(), h2.to_bits()], "two-point");
        let e = estimate_two_point_correlation(&self.setup, h1, &y, h2, self.replicates, seed, &Sequential)?;
        Ok((e.value, e.se))
    }
}

/// The height-integrated constants: `I0 = ∫ m(h) h^δ dh` and
/// `J0 = ∫∫∫ c(h1, |y|, h2) h1^δ h2^δ dh1 dy dh2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitConstants {
    pub i0: f64,
    /// Difference between two quadrature orders.
    pub i0_quadrature_error: f64,
    pub i0_mc_se: f64,
    pub j0: f64,
    pub j0_quadrature_error: f64,
    pub j0_mc_se: f64,
    /// Heights above `h_max` are dropped.
    pub h_max: f64,
}

impl LimitConstants {
    pub fn i0_error(&self) -> f64 {
        self.i0_quadrature_error + 2.0 * self.i0_mc_se
    }

    pub fn j0_error(&self) -> f64 {
        self.j0_quadrature_error + 2.0 * self.j0_mc_se
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Nodes per panel; a second pass with `3/2` as many nodes gives the error estimate.
    pub nodes: usize,
    /// Height truncation; by default where the empty-cone probability drops below `1e-12`.
    pub h_max: Option<f64>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { nodes: 16, h_max: None }
    }
}

/// Height at which the downward cone holds `ln(1e12)` expected points.
pub fn default_h_max(d: usize, alpha: f64, delta: f64) -> f64 {
    let unit = downward_cone_mass(d - 1, alpha, delta, 1.0);
    let expo = (d - 1) as f64 / alpha + 1.0 + delta;
    powf(12.0 * core::f64::consts::LN_10 / unit, 1.0 / expo)
}

struct Accumulated {
    value: f64,
    var: f64,
}

fn one_point_integral(source: &impl CorrelationSource, h_max: f64, nodes: usize) -> Result<Accumulated> {
    let (x, w) = gauss_legendre(nodes, 0.0, h_max);
    let mut acc = Accumulated { value: 0.0, var: 0.0 };
    for (h, w) in x.iter().zip(&w) {
        let (m, se) = source.one_point(*h)?;
        let wt = w * powf(*h, source.delta());
        acc.value += wt * m;
        acc.var += wt * wt * se * se;
    }
    Ok(acc)
}

/// Breakpoints in `r` for fixed heights: where one point enters the other's cone and
/// where the two cones separate.
fn radial_panels(alpha: f64, h1: f64, h2: f64, h_max: f64) -> Vec<(f64, f64)> {
    let inv = |u: f64| powf(u.max(0.0), 1.0 / alpha);
    let enter = inv((h1 - h2).abs());
    let apart = inv(h1) + inv(h2);
    let mut panels = vec![(0.0, enter), (enter, apart)];
    if alpha > 1.0 {
        // Convex profiles can correlate beyond the cone reach.
        panels.push((apart, apart + 2.0 * inv(h_max)));
    }
    panels.retain(|(a, b)| b > a);
    panels
}

fn two_point_integral(
    source: &impl CorrelationSource,
    h_max: f64,
    nodes: usize,
    exec: &impl Executor,
) -> Result<Accumulated> {
    let (k, delta, alpha) = (source.d() - 1, source.delta(), source.alpha());
    let sphere = math::unit_sphere_area(k);
    let (x1, w1) = gauss_legendre(nodes, 0.0, h_max);
    let rows = exec.map_indexed(nodes, |a| -> Result<Accumulated> {
        let h1 = x1[a];
        let mut acc = Accumulated { value: 0.0, var: 0.0 };
        for (lo, hi) in [(0.0, h1), (h1, h_max)] {
            let (x2, w2) = gauss_legendre(nodes, lo, hi);
            for (h2, wb) in x2.iter().zip(&w2) {
                for (ra, rb) in radial_panels(alpha, h1, *h2, h_max) {
                    let (xr, wr) = gauss_legendre(nodes, ra, rb);
                    for (r, wc) in xr.iter().zip(&wr) {
                        let (c, se) = source.two_point(h1, *r, *h2)?;
                        let wt = w1[a] * wb * wc * powf(h1 * h2, delta) * sphere * powf(*r, (k - 1) as f64);
                        acc.value += wt * c;
                        acc.var += wt * wt * se * se;
                    }
                }
            }
        }
        Ok(acc)
    });
    let mut total = Accumulated { value: 0.0, var: 0.0 };
    for r in rows {
        let r = r?;
        total.value += r.value;
        total.var += r.var;
    }
    Ok(total)
}

/// `I0` and `J0` by tensor Gauss–Legendre quadrature against `source`.
pub fn limit_constants(
    source: &impl CorrelationSource,
    options: &QuadratureOptions,
    exec: &impl Executor,
) -> Result<LimitConstants> {
    if options.nodes < 2 {
        return Err(Error::arg("nodes", "need at least 2 quadrature nodes"));
    }
    let h_max = match options.h_max {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(Error::arg("h_max", format!("must be > 0, got {h}"))),
        None => default_h_max(source.d(), source.alpha(), source.delta()),
    };
    let coarse = options.nodes;
    let fine = coarse + coarse / 2;
    let i_fine = one_point_integral(source, h_max, fine)?;
    let i_coarse = one_point_integral(source, h_max, coarse)?;
    let j_fine = two_point_integral(source, h_max, fine, exec)?;
    let j_coarse = two_point_integral(source, h_max, coarse, exec)?;
    Ok(LimitConstants {
        i0: i_fine.value,
        i0_quadrature_error: (i_fine.value - i_coarse.value).abs(),
        i0_mc_se: sqrt(i_fine.var),
        j0: j_fine.value,
        j0_quadrature_error: (j_fine.value - j_coarse.value).abs(),
        j0_mc_se: sqrt(j_fine.var),
        h_max,
    })
}

/// Value with an absolute error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Spatial part of the limit integrals: the box `A`, the base density and `τ`.
#[derive(Debug, Clone)]
pub struct SpatialSetup {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub rho0: Rho0,
    pub tau: f64,
    pub nodes: usize,
}

impl SpatialSetup {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, rho0: Rho0, tau: f64) -> Self {
        Self { lo, hi, rho0, tau, nodes: 48 }
    }

    /// `∫_A w(x) ρ₀(x)^τ dx` over the part of `A` where `w` can be nonzero, with the
    /// difference to a coarser rule as error.
    pub fn integral(&self, support: &[&TestFunction], w: impl Fn(&[f64]) -> f64) -> Estimate {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        for f in support {
            if let TestFunction::Bump { center, radius, .. } = f {
                for k in 0..lo.len() {
                    lo[k] = lo[k].max(center[k] - radius);
                    hi[k] = hi[k].min(center[k] + radius);
                }
            }
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
            return Estimate { value: 0.0, error: 0.0 };
        }
        let g = |x: &[f64]| w(x) * powf(self.rho0.eval(x), self.tau);
        let fine = tensor_quadrature(&lo, &hi, self.nodes, g);
        let coarse = tensor_quadrature(&lo, &hi, self.nodes / 2, g);
        Estimate { value: fine, error: (fine - coarse).abs() }
    }
}

fn scaled(constant: f64, constant_error: f64, integral: Estimate) -> Estimate {
    Estimate {
        value: constant * integral.value,
        error: constant.abs() * integral.error + constant_error * integral.value.abs(),
    }
}

/// `I(f) = I0 · ∫ f ρ₀^τ`.
pub fn estimate_i(f: &TestFunction, space: &SpatialSetup, constants: &LimitConstants) -> Estimate {
    scaled(constants.i0, constants.i0_error(), space.integral(&[f], |x| f.eval(x)))
}

/// `J(f) = J0 · ∫ f ρ₀^τ`.
pub fn estimate_j(f: &TestFunction, space: &SpatialSetup, constants: &LimitConstants) -> Estimate {
    scaled(constants.j0, constants.j0_error(), space.integral(&[f], |x| f.eval(x)))
}

/// Limiting variance `I(f²) + J(f²)` of `⟨f, μ⟩ / λ^{τ/2}`.
pub fn limit_variance(f: &TestFunction, space: &SpatialSetup, constants: &LimitConstants) -> Estimate {
    let s = space.integral(&[f], |x| f.eval(x) * f.eval(x));
    let c = constants.i0 + constants.j0;
    scaled(c, constants.i0_error() + constants.j0_error(), s)
}

/// Predicted limiting correlation `(I(fg)+J(fg)) / sqrt((I(f²)+J(f²))(I(g²)+J(g²)))`.
///
/// The height constants cancel, leaving a ratio of spatial integrals.
pub fn kernel_correlation(f: &TestFunction, g: &TestFunction, space: &SpatialSetup) -> Estimate {
    let fg = space.integral(&[f, g], |x| f.eval(x) * g.eval(x));
    let ff = space.integral(&[f], |x| f.eval(x) * f.eval(x));
    let gg = space.integral(&[g], |x| g.eval(x) * g.eval(x));
    let denom = sqrt(ff.value * gg.value);
    let value = fg.value / denom;
    let rel = fg.error / fg.value.abs().max(1e-300) + 0.5 * (ff.error / ff.value + gg.error / gg.value);
    Estimate { value, error: if fg.value == 0.0 { 0.0 } else { value.abs() * rel } }
}
