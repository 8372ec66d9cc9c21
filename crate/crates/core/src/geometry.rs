//! Space-time points, growth profiles ψ, cones and the λ-rescaling.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, acos, cos, powf};

/// A point `(x, h)` of ℝ^{d-1} × ℝ₊.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpaceTimePoint {
    pub spatial: Vec<f64>,
    pub time: f64,
}

impl SpaceTimePoint {
    pub fn new(spatial: Vec<f64>, time: f64) -> Result<Self> {
        if !(time >= 0.0) {
            return Err(Error::arg("time", format!("must be >= 0, got {time}")));
        }
        Ok(Self { spatial, time })
    }
}

/// Growth profile ψ. Epigraphs of `h + ψ(|y - x|)` are the grains of the growth process.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PsiSpec {
    /// ψ(l) = l^α.
    PowerLaw { alpha: f64 },
    /// ψ(l) = 1 − cos l on [0, π]; behaves like l²/2 at the origin.
    SphericalCap,
    /// Piecewise-linear through `knots`; the small-l exponent must be supplied.
    Tabulated { knots: Vec<(f64, f64)>, alpha_at_zero: f64 },
}

impl PsiSpec {
    pub fn power_law(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::arg("alpha", format!("must be a finite positive number, got {alpha}")));
        }
        Ok(PsiSpec::PowerLaw { alpha })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>, alpha_at_zero: f64) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::arg("knots", "need at least two knots"));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::arg("knots", "first knot must be (0, 0)"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::arg("knots", "l-values must be strictly increasing"));
            }
            if !(w[1].1 >= w[0].1) {
                return Err(Error::arg("knots", "ψ-values must be nondecreasing"));
            }
        }
        if !(alpha_at_zero > 0.0) {
            return Err(Error::arg("alpha_at_zero", "must be > 0"));
        }
        Ok(PsiSpec::Tabulated { knots, alpha_at_zero })
    }

    /// The exponent α with ψ(l) = l^α (1 + o(1)) at zero.
    pub fn alpha_at_zero(&self) -> f64 {
        match self {
            PsiSpec::PowerLaw { alpha } => *alpha,
            PsiSpec::SphericalCap => 2.0,
            PsiSpec::Tabulated { alpha_at_zero, .. } => *alpha_at_zero,
        }
    }

    /// Right end of the declared domain (`f64::INFINITY` for power laws).
    pub fn domain_max(&self) -> f64 {
        match self {
            PsiSpec::PowerLaw { .. } => f64::INFINITY,
            PsiSpec::SphericalCap => math::PI,
            PsiSpec::Tabulated { knots, .. } => knots[knots.len() - 1].0,
        }
    }

    pub fn range_max(&self) -> f64 {
        match self {
            PsiSpec::PowerLaw { .. } => f64::INFINITY,
            PsiSpec::SphericalCap => 2.0,
            PsiSpec::Tabulated { knots, .. } => knots[knots.len() - 1].1,
        }
    }

    pub fn is_power_law(&self) -> bool {
        matches!(self, PsiSpec::PowerLaw { .. })
    }

    pub fn eval(&self, l: f64) -> Result<f64> {
        if !(l >= 0.0) || l > self.domain_max() {
            return Err(Error::Domain(format!("ψ argument {l} outside [0, {}]", self.domain_max())));
        }
        Ok(self.eval_unchecked(l))
    }

    /// ψ(l) without the domain check; callers guarantee `0 <= l <= domain_max()`.
    #[inline]
    pub fn eval_unchecked(&self, l: f64) -> f64 {
        match self {
            PsiSpec::PowerLaw { alpha } => {
                if *alpha == 1.0 {
                    l
                } else if *alpha == 2.0 {
                    l * l
                } else {
                    powf(l, *alpha)
                }
            }
            PsiSpec::SphericalCap => 1.0 - cos(l),
            PsiSpec::Tabulated { knots, .. } => interpolate(knots, l),
        }
    }

    /// Smallest l with ψ(l) = u.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) || u > self.range_max() {
            return Err(Error::Domain(format!("ψ value {u} outside [0, {}]", self.range_max())));
        }
        Ok(match self {
            PsiSpec::PowerLaw { alpha } => {
                if *alpha == 1.0 {
                    u
                } else {
                    powf(u, 1.0 / alpha)
                }
            }
            PsiSpec::SphericalCap => acos(1.0 - u),
            PsiSpec::Tabulated { knots, .. } => {
                let k = knots.windows(2).position(|w| w[1].1 >= u).unwrap_or(knots.len() - 2);
                let (l0, p0) = knots[k];
                let (l1, p1) = knots[k + 1];
                if p0 >= u {
                    l0
                } else {
                    l0 + (l1 - l0) * (u - p0) / (p1 - p0)
                }
            }
        })
    }
}

fn interpolate(knots: &[(f64, f64)], l: f64) -> f64 {
    let k = knots.partition_point(|&(kl, _)| kl <= l);
    if k == 0 {
        return knots[0].1;
    }
    if k >= knots.len() {
        return knots[knots.len() - 1].1;
    }
    let (l0, p0) = knots[k - 1];
    let (l1, p1) = knots[k];
    p0 + (p1 - p0) * (l - l0) / (l1 - l0)
}

/// The exponents (τ, β, γ) for given (d, α, δ).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingExponents {
    pub d: usize,
    pub alpha: f64,
    pub delta: f64,
    pub tau: f64,
    pub beta: f64,
    pub gamma: f64,
}

pub fn compute_exponents(d: usize, alpha: f64, delta: f64) -> Result<ScalingExponents> {
    if d < 2 {
        return Err(Error::arg("d", format!("must be >= 2, got {d}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::arg("alpha", format!("must be > 0, got {alpha}")));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::arg("delta", format!("must be >= 0, got {delta}")));
    }
    let k = (d - 1) as f64;
    let denom = k + alpha * (1.0 + delta);
    let gamma = alpha / denom;
    Ok(ScalingExponents { d, alpha, delta, tau: k / denom, beta: gamma / alpha, gamma })
}

impl ScalingExponents {
    /// Largest violation of the three defining identities.
    pub fn identity_residual(&self) -> f64 {
        let k = (self.d - 1) as f64;
        let r1 = (self.beta * k + self.gamma * (1.0 + self.delta) - 1.0).abs();
        let r2 = (self.beta * self.alpha - self.gamma).abs();
        let r3 = (self.tau - (1.0 - self.gamma * (1.0 + self.delta))).abs();
        r1.max(r2).max(r3)
    }
}

/// Where a configuration lives.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Region {
    /// `A × [0, time_cap]` with `A = Π [lo_k, hi_k]`.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
        time_cap: f64,
    },
    /// The unit ball B_d; points are stored as d-dimensional vectors.
    Ball {
        d: usize,
    },
    /// Shell `inner <= |x| <= 1` of B_d.
    SphereShell {
        d: usize,
        inner: f64,
    },
    /// `B_{d-1}(0, radius) × [0, time_cap]`, the window for the limit process.
    Window {
        radius: f64,
        time_cap: f64,
    },
    Unspecified,
}

/// A finite point set. Coordinates are stored flat: point `i` has spatial
/// coordinates `spatial[i*stride..(i+1)*stride]` and time `time[i]`.
///
/// Space-time configurations have `stride = d - 1`; ball samples have
/// `stride = d` and all times zero.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointConfiguration {
    pub d: usize,
    pub stride: usize,
    pub spatial: Vec<f64>,
    pub time: Vec<f64>,
    pub region: Region,
}

impl PointConfiguration {
    pub fn empty(d: usize, region: Region) -> Self {
        let stride = match region {
            Region::Ball { .. } | Region::SphereShell { .. } => d,
            _ => d - 1,
        };
        Self { d, stride, spatial: Vec::new(), time: Vec::new(), region }
    }

    pub fn from_points(d: usize, points: &[SpaceTimePoint], region: Region) -> Result<Self> {
        let mut c = Self::empty(d, region);
        for p in points {
            c.push(&p.spatial, p.time)?;
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    #[inline]
    pub fn x(&self, i: usize) -> &[f64] {
        &self.spatial[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn h(&self, i: usize) -> f64 {
        self.time[i]
    }

    pub fn point(&self, i: usize) -> SpaceTimePoint {
        SpaceTimePoint { spatial: self.x(i).to_vec(), time: self.time[i] }
    }

    pub fn push(&mut self, x: &[f64], h: f64) -> Result<()> {
        if x.len() != self.stride {
            return Err(Error::arg("point", format!("expected {} coordinates, got {}", self.stride, x.len())));
        }
        if !(h >= 0.0) {
            return Err(Error::arg("time", format!("must be >= 0, got {h}")));
        }
        self.spatial.extend_from_slice(x);
        self.time.push(h);
        Ok(())
    }

    /// A copy keeping only the points whose index satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut out = Self { spatial: Vec::new(), time: Vec::new(), ..self.clone_meta() };
        for i in 0..self.len() {
            if keep(i) {
                out.spatial.extend_from_slice(self.x(i));
                out.time.push(self.time[i]);
            }
        }
        out
    }

    fn clone_meta(&self) -> Self {
        Self { d: self.d, stride: self.stride, spatial: Vec::new(), time: Vec::new(), region: self.region.clone() }
    }

    /// Largest spatial distance between two points.
    pub fn spatial_diameter(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        // Bounding-box diagonal for large inputs; exact pairwise maximum for small ones.
        if n > 2048 {
            let (lo, hi) = self.bounding_box();
            return math::dist(&lo, &hi);
        }
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(math::dist2(self.x(i), self.x(j)));
            }
        }
        math::sqrt(best)
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = alloc::vec![f64::INFINITY; self.stride];
        let mut hi = alloc::vec![f64::NEG_INFINITY; self.stride];
        for i in 0..self.len() {
            for (k, &v) in self.x(i).iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        (lo, hi)
    }

    pub fn max_time(&self) -> f64 {
        self.time.iter().copied().fold(0.0, f64::max)
    }

    /// Checks stride consistency, non-negative times and pairwise-distinct points.
    pub fn validate(&self) -> Result<()> {
        if self.spatial.len() != self.time.len() * self.stride {
            return Err(Error::arg("config", "coordinate buffer length does not match point count"));
        }
        if self.time.iter().any(|h| !(*h >= 0.0)) {
            return Err(Error::arg("config", "negative or NaN time coordinate"));
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.time[a].total_cmp(&self.time[b]).then_with(|| lex_cmp(self.x(a), self.x(b))));
        for w in order.windows(2) {
            if self.time[w[0]] == self.time[w[1]] && self.x(w[0]) == self.x(w[1]) {
                return Err(Error::arg("config", format!("points {} and {} coincide", w[0], w[1])));
            }
        }
        Ok(())
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.total_cmp(y);
        if c.is_ne() {
            return c;
        }
    }
    core::cmp::Ordering::Equal
}

fn check_dims(a: &SpaceTimePoint, b: &SpaceTimePoint) -> Result<()> {
    if a.spatial.len() != b.spatial.len() {
        return Err(Error::arg("point", "points have different spatial dimension"));
    }
    Ok(())
}

/// `query ∈ K[apex]`, i.e. `h_q >= h_a + ψ(|x_q - x_a|)`. The boundary counts as inside.
pub fn upward_cone_contains(apex: &SpaceTimePoint, query: &SpaceTimePoint, psi: &PsiSpec) -> Result<bool> {
    check_dims(apex, query)?;
    let l = math::dist(&apex.spatial, &query.spatial);
    Ok(query.time >= apex.time + psi.eval(l)?)
}

/// `query ∈ K↓[apex]`, i.e. `h_q <= h_a - ψ(|x_q - x_a|)`.
pub fn downward_cone_contains(apex: &SpaceTimePoint, query: &SpaceTimePoint, psi: &PsiSpec) -> Result<bool> {
    check_dims(apex, query)?;
    let l = math::dist(&apex.spatial, &query.spatial);
    Ok(query.time <= apex.time - psi.eval(l)?)
}

/// Maps every point `(y, h)` to `(λ^β (y - center), λ^γ h)`.
pub fn rescale(
    config: &PointConfiguration,
    center: &[f64],
    lambda: f64,
    exps: &ScalingExponents,
) -> Result<PointConfiguration> {
    if !(lambda > 0.0) {
        return Err(Error::arg("lambda", format!("must be > 0, got {lambda}")));
    }
    if config.stride != config.d - 1 {
        return Err(Error::arg("config", "rescaling applies to space-time configurations"));
    }
    if center.len() != config.stride {
        return Err(Error::arg("center", format!("expected {} coordinates", config.stride)));
    }
    let sx = powf(lambda, exps.beta);
    let st = powf(lambda, exps.gamma);
    let mut out = config.clone();
    for (k, v) in out.spatial.iter_mut().enumerate() {
        *v = sx * (*v - center[k % config.stride]);
    }
    for h in out.time.iter_mut() {
        *h *= st;
    }
    out.region = match &config.region {
        Region::Box { lo, hi, time_cap } => Region::Box {
            lo: lo.iter().zip(center).map(|(a, c)| sx * (a - c)).collect(),
            hi: hi.iter().zip(center).map(|(a, c)| sx * (a - c)).collect(),
            time_cap: st * time_cap,
        },
        Region::Window { radius, time_cap } if center.iter().all(|c| *c == 0.0) => {
            Region::Window { radius: sx * radius, time_cap: st * time_cap }
        }
        _ => Region::Unspecified,
    };
    Ok(out)
}
