//! Seeded Poisson and binomial samplers for densities `ρ(x, h) = ρ₀(x) h^δ`.
//!
//! All samplers split their randomness into a `count` stream and a `points` stream
//! derived from the caller's seed. The points stream produces i.i.d. draws from
//! the normalized density, so with the same seed a binomial sample of size `n` and
//! a Poisson sample of mean `n` share their first `min(n, N)` points. That coupling
//! is what makes binomial/Poisson comparisons cheap to estimate precisely.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{PointConfiguration, Region};
use crate::math::{self, powf};
use crate::rng::{self, StreamRng};
use crate::special::{beta_reg, downward_cone_mass, gauss_legendre, ln_beta};

/// Spatial factor ρ₀ of the density. On the ball it is evaluated at directions `x/|x|`.
/// Shared spatial function `x -> value`.
pub type SpatialFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Shared function `(x, h) -> value`.
pub type SpaceTimeFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Rho0 {
    Constant(f64),
    /// `base + slope · x`.
    Affine {
        base: f64,
        slope: Vec<f64>,
    },
    /// User-supplied function with declared bounds `0 < lower <= ρ₀ <= upper`.
    Custom {
        f: SpatialFn,
        lower: f64,
        upper: f64,
    },
}

impl fmt::Debug for Rho0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho0::Constant(c) => write!(f, "Constant({c})"),
            Rho0::Affine { base, slope } => write!(f, "Affine {{ base: {base}, slope: {slope:?} }}"),
            Rho0::Custom { lower, upper, .. } => write!(f, "Custom {{ lower: {lower}, upper: {upper} }}"),
        }
    }
}

impl PartialEq for Rho0 {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rho0::Constant(a), Rho0::Constant(b)) => a == b,
            (Rho0::Affine { base: a, slope: s }, Rho0::Affine { base: b, slope: t }) => a == b && s == t,
            (Rho0::Custom { f, .. }, Rho0::Custom { f: g, .. }) => Arc::ptr_eq(f, g),
            _ => false,
        }
    }
}

impl Rho0 {
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Rho0::Constant(c) => *c,
            Rho0::Affine { base, slope } => base + math::dot(slope, x),
            Rho0::Custom { f, .. } => f(x),
        }
    }

    /// Bounds of ρ₀ over a box.
    pub fn bounds_on_box(&self, lo: &[f64], hi: &[f64]) -> (f64, f64) {
        match self {
            Rho0::Constant(c) => (*c, *c),
            Rho0::Affine { base, slope } => {
                let (mut a, mut b) = (*base, *base);
                for ((s, l), h) in slope.iter().zip(lo).zip(hi) {
                    a += (s * l).min(s * h);
                    b += (s * l).max(s * h);
                }
                (a, b)
            }
            Rho0::Custom { lower, upper, .. } => (*lower, *upper),
        }
    }

    /// Bounds of ρ₀ over unit directions.
    pub fn bounds_on_sphere(&self) -> (f64, f64) {
        match self {
            Rho0::Constant(c) => (*c, *c),
            Rho0::Affine { base, slope } => {
                let s = math::norm(slope);
                (base - s, base + s)
            }
            Rho0::Custom { lower, upper, .. } => (*lower, *upper),
        }
    }

    /// ∫_A ρ₀ dx over a box (Gauss–Legendre tensor rule for custom functions).
    pub fn mass_on_box(&self, lo: &[f64], hi: &[f64]) -> f64 {
        let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
        match self {
            Rho0::Constant(c) => c * vol,
            Rho0::Affine { base, slope } => {
                let centroid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
                vol * (base + math::dot(slope, &centroid))
            }
            Rho0::Custom { f, .. } => tensor_quadrature(lo, hi, 12, |x| f(x)),
        }
    }

    fn check(&self, value: f64, lower: f64, upper: f64) -> Result<()> {
        if !(value >= lower * (1.0 - 1e-12)) || !(value <= upper * (1.0 + 1e-12)) {
            return Err(Error::arg("rho0", format!("value {value} violates the declared bounds [{lower}, {upper}]")));
        }
        Ok(())
    }
}

/// Tensor-product Gauss–Legendre quadrature of `f` over a box.
pub fn tensor_quadrature(lo: &[f64], hi: &[f64], nodes: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = lo.iter().zip(hi).map(|(a, b)| gauss_legendre(nodes, *a, *b)).collect();
    let k = lo.len();
    let mut idx = vec![0usize; k];
    let mut x = vec![0.0; k];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for j in 0..k {
            x[j] = rules[j].0[idx[j]];
            w *= rules[j].1[idx[j]];
        }
        total += w * f(&x);
        let mut j = 0;
        loop {
            if j == k {
                return total;
            }
            idx[j] += 1;
            if idx[j] < nodes {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Where points are drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplingRegion {
    /// `A = Π [lo_k, hi_k]` in ℝ^{d-1}; the time axis is truncated at `time_cap`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// The unit ball B_d with density `ρ₀(x/|x|)(1 − |x|)^δ`.
    Ball { d: usize },
    /// The part `inner <= |x| <= 1` of the ball.
    SphereShell { d: usize, inner: f64 },
}

/// Multiplicative perturbation `q(x, h) ∈ [0, upper]` of the density.
#[derive(Clone)]
pub struct Perturbation {
    pub f: SpaceTimeFn,
    pub upper: f64,
}

impl fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perturbation {{ upper: {} }}", self.upper)
    }
}

#[derive(Debug, Clone)]
pub struct DensitySpec {
    pub delta: f64,
    pub rho0: Rho0,
    pub region: SamplingRegion,
    /// Truncation height for box regions.
    pub time_cap: f64,
    pub perturbation: Option<Perturbation>,
}

impl DensitySpec {
    pub fn new_box(lo: Vec<f64>, hi: Vec<f64>, rho0: Rho0, delta: f64, time_cap: f64) -> Result<Self> {
        let spec = Self { delta, rho0, region: SamplingRegion::Box { lo, hi }, time_cap, perturbation: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn new_ball(d: usize, rho0: Rho0, delta: f64) -> Result<Self> {
        let spec = Self { delta, rho0, region: SamplingRegion::Ball { d }, time_cap: 1.0, perturbation: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Result<Self> {
        if !(p.upper > 0.0) {
            return Err(Error::arg("perturbation", "upper bound must be > 0"));
        }
        self.perturbation = Some(p);
        Ok(self)
    }

    /// The dimension d of the ambient space (spatial dimension plus time for boxes).
    pub fn d(&self) -> usize {
        match &self.region {
            SamplingRegion::Box { lo, .. } => lo.len() + 1,
            SamplingRegion::Ball { d } | SamplingRegion::SphereShell { d, .. } => *d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::arg("delta", format!("must be >= 0, got {}", self.delta)));
        }
        let (lower, upper) = match &self.region {
            SamplingRegion::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::arg("region", "box bounds must be nonempty and of equal length"));
                }
                if lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
                    return Err(Error::arg("region", "box must have hi > lo in every coordinate"));
                }
                if !(self.time_cap > 0.0) || !self.time_cap.is_finite() {
                    return Err(Error::arg("time_cap", format!("must be > 0, got {}", self.time_cap)));
                }
                if let Rho0::Affine { slope, .. } = &self.rho0 {
                    if slope.len() != lo.len() {
                        return Err(Error::arg("rho0", "slope length must match the spatial dimension"));
                    }
                }
                self.rho0.bounds_on_box(lo, hi)
            }
            SamplingRegion::Ball { d } | SamplingRegion::SphereShell { d, .. } => {
                if *d < 2 {
                    return Err(Error::arg("d", "must be >= 2"));
                }
                if let SamplingRegion::SphereShell { inner, .. } = &self.region {
                    if !(*inner >= 0.0 && *inner < 1.0) {
                        return Err(Error::arg("inner", "shell radius must lie in [0, 1)"));
                    }
                }
                if let Rho0::Affine { slope, .. } = &self.rho0 {
                    if slope.len() != *d {
                        return Err(Error::arg("rho0", "slope length must equal d"));
                    }
                }
                self.rho0.bounds_on_sphere()
            }
        };
        if !(lower > 0.0) || !(upper >= lower) || !upper.is_finite() {
            return Err(Error::arg("rho0", format!("must be bounded away from 0 and above, got [{lower}, {upper}]")));
        }
        Ok(())
    }

    /// Total mass `∫ ρ` of the (unperturbed) density.
    pub fn mass(&self) -> f64 {
        match &self.region {
            SamplingRegion::Box { lo, hi } => self.rho0.mass_on_box(lo, hi) * time_mass(self.delta, self.time_cap),
            SamplingRegion::Ball { d } => sphere_mass(&self.rho0, *d) * radial_mass(*d, self.delta, 0.0),
            SamplingRegion::SphereShell { d, inner } => {
                sphere_mass(&self.rho0, *d) * radial_mass(*d, self.delta, *inner)
            }
        }
    }
}

fn time_mass(delta: f64, cap: f64) -> f64 {
    powf(cap, 1.0 + delta) / (1.0 + delta)
}

fn sphere_mass(rho0: &Rho0, d: usize) -> f64 {
    let area = math::unit_sphere_area(d);
    match rho0 {
        Rho0::Constant(c) => c * area,
        Rho0::Affine { base, .. } => base * area,
        // Custom directions are handled by thinning; callers use the upper bound.
        Rho0::Custom { upper, .. } => upper * area,
    }
}

/// `∫_{inner}^1 r^{d-1} (1 − r)^δ dr`.
fn radial_mass(d: usize, delta: f64, inner: f64) -> f64 {
    let full = math::exp(ln_beta(d as f64, delta + 1.0));
    full * (1.0 - beta_reg(d as f64, delta + 1.0, inner))
}

fn poisson_count(rng: &mut StreamRng, mean: f64) -> Result<usize> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::arg("lambda", format!("Poisson mean must be finite and >= 0, got {mean}")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::arg("lambda", format!("{e}")))?;
    Ok(dist.sample(rng) as usize)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::arg("lambda", format!("must be > 0, got {lambda}")));
    }
    Ok(())
}

/// Draws i.i.d. points from the normalized box density.
struct BoxPointStream<'a> {
    spec: &'a DensitySpec,
    lo: &'a [f64],
    hi: &'a [f64],
    lower: f64,
    upper: f64,
    rng: StreamRng,
    buf: Vec<f64>,
}

impl<'a> BoxPointStream<'a> {
    fn new(spec: &'a DensitySpec, seed: u64) -> Result<Self> {
        let SamplingRegion::Box { lo, hi } = &spec.region else {
            return Err(Error::arg("region", "box sampler needs a box region"));
        };
        spec.validate()?;
        let (lower, upper) = spec.rho0.bounds_on_box(lo, hi);
        Ok(Self { spec, lo, hi, lower, upper, rng: rng::stream(seed, &[], "points"), buf: vec![0.0; lo.len()] })
    }

    /// One candidate from `ρ₀(x) h^δ`; perturbation thinning is left to the caller.
    fn candidate(&mut self) -> Result<f64> {
        loop {
            for (k, v) in self.buf.iter_mut().enumerate() {
                *v = self.lo[k] + (self.hi[k] - self.lo[k]) * self.rng.random::<f64>();
            }
            if matches!(self.spec.rho0, Rho0::Constant(_)) {
                break;
            }
            let value = self.spec.rho0.eval(&self.buf);
            self.spec.rho0.check(value, self.lower, self.upper)?;
            if self.rng.random::<f64>() * self.upper <= value {
                break;
            }
        }
        let u: f64 = self.rng.random();
        Ok(self.spec.time_cap * powf(u, 1.0 / (1.0 + self.spec.delta)))
    }

    fn keep(&mut self, h: f64) -> Result<bool> {
        match &self.spec.perturbation {
            None => Ok(true),
            Some(p) => {
                let q = (p.f)(&self.buf, h);
                if !(q >= 0.0 && q <= p.upper * (1.0 + 1e-12)) {
                    return Err(Error::arg("perturbation", format!("value {q} outside [0, {}]", p.upper)));
                }
                Ok(self.rng.random::<f64>() * p.upper <= q)
            }
        }
    }
}

fn box_region(spec: &DensitySpec) -> Region {
    match &spec.region {
        SamplingRegion::Box { lo, hi } => Region::Box { lo: lo.clone(), hi: hi.clone(), time_cap: spec.time_cap },
        _ => Region::Unspecified,
    }
}

/// Poisson process of intensity `λ ρ₀(x) h^δ` on `A × [0, time_cap]`.
pub fn sample_poisson_box(spec: &DensitySpec, lambda: f64, seed: u64) -> Result<PointConfiguration> {
    check_lambda(lambda)?;
    let mut stream = BoxPointStream::new(spec, seed)?;
    let q_max = spec.perturbation.as_ref().map_or(1.0, |p| p.upper);
    let n = poisson_count(&mut rng::stream(seed, &[], "count"), lambda * spec.mass() * q_max)?;
    let mut cfg = PointConfiguration::empty(spec.d(), box_region(spec));
    cfg.spatial.reserve(n * (spec.d() - 1));
    cfg.time.reserve(n);
    for _ in 0..n {
        let h = stream.candidate()?;
        if stream.keep(h)? {
            cfg.spatial.extend_from_slice(&stream.buf);
            cfg.time.push(h);
        }
    }
    Ok(cfg)
}

/// Exactly `n` i.i.d. points from the normalized box density.
pub fn sample_binomial_box(spec: &DensitySpec, n: usize, seed: u64) -> Result<PointConfiguration> {
    let mut stream = BoxPointStream::new(spec, seed)?;
    let mut cfg = PointConfiguration::empty(spec.d(), box_region(spec));
    while cfg.len() < n {
        let h = stream.candidate()?;
        if stream.keep(h)? {
            cfg.spatial.extend_from_slice(&stream.buf);
            cfg.time.push(h);
        }
    }
    Ok(cfg)
}

fn uniform_direction(rng: &mut StreamRng, out: &mut [f64]) {
    loop {
        for v in out.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        let n = math::norm(out);
        if n > 1e-300 {
            out.iter_mut().for_each(|v| *v /= n);
            return;
        }
    }
}

/// Inverse of the radial CDF `∝ r^{d-1} (1 − r)^δ` on `[inner, 1]`.
fn radial_quantile(d: usize, delta: f64, inner: f64, u: f64) -> f64 {
    if delta == 0.0 {
        let a = powf(inner, d as f64);
        return powf(a + u * (1.0 - a), 1.0 / d as f64);
    }
    let (a, b) = (d as f64, delta + 1.0);
    let f_inner = beta_reg(a, b, inner);
    let target = f_inner + u * (1.0 - f_inner);
    let (mut lo, mut hi) = (inner, 1.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Poisson process on B_d with intensity `λ ρ₀(x/|x|) (1 − |x|)^δ dx`.
///
/// Points are stored as d-dimensional vectors with time 0.
pub fn sample_poisson_ball(d: usize, delta: f64, rho0: &Rho0, lambda: f64, seed: u64) -> Result<PointConfiguration> {
    let spec = DensitySpec::new_ball(d, rho0.clone(), delta)?;
    sample_poisson_ball_spec(&spec, lambda, seed)
}

pub fn sample_poisson_ball_spec(spec: &DensitySpec, lambda: f64, seed: u64) -> Result<PointConfiguration> {
    check_lambda(lambda)?;
    spec.validate()?;
    let (d, inner, region) = match &spec.region {
        SamplingRegion::Ball { d } => (*d, 0.0, Region::Ball { d: *d }),
        SamplingRegion::SphereShell { d, inner } => (*d, *inner, Region::SphereShell { d: *d, inner: *inner }),
        SamplingRegion::Box { .. } => return Err(Error::arg("region", "ball sampler needs a ball region")),
    };
    let (lower, upper) = spec.rho0.bounds_on_sphere();
    let thinning = !matches!(spec.rho0, Rho0::Constant(_));
    // Candidates come from the constant density `upper` on directions and are thinned to ρ₀.
    let candidate_mass =
        if thinning { upper * math::unit_sphere_area(d) * radial_mass(d, spec.delta, inner) } else { spec.mass() };
    let n = poisson_count(&mut rng::stream(seed, &[], "count"), lambda * candidate_mass)?;
    let mut rng = rng::stream(seed, &[], "points");
    let mut cfg = PointConfiguration::empty(d, region);
    cfg.spatial.reserve(n * d);
    let mut dir = vec![0.0; d];
    for _ in 0..n {
        let r = radial_quantile(d, spec.delta, inner, rng.random());
        uniform_direction(&mut rng, &mut dir);
        if thinning {
            let value = spec.rho0.eval(&dir);
            spec.rho0.check(value, lower, upper)?;
            if rng.random::<f64>() * upper > value {
                continue;
            }
        }
        cfg.spatial.extend(dir.iter().map(|u| r * u));
        cfg.time.push(0.0);
    }
    Ok(cfg)
}

/// Poisson points on `B_{d-1}(0, window_radius) × [0, time_cap]` with intensity `h^δ dx dh`.
pub fn sample_limit_process(
    d: usize,
    delta: f64,
    window_radius: f64,
    time_cap: f64,
    seed: u64,
) -> Result<PointConfiguration> {
    if d < 2 {
        return Err(Error::arg("d", "must be >= 2"));
    }
    if !(delta >= 0.0) {
        return Err(Error::arg("delta", "must be >= 0"));
    }
    if !(window_radius > 0.0) {
        return Err(Error::arg("window_radius", "must be > 0"));
    }
    if !(time_cap > 0.0) {
        return Err(Error::arg("time_cap", "must be > 0"));
    }
    let k = d - 1;
    let mass = math::unit_ball_volume(k) * powf(window_radius, k as f64) * time_mass(delta, time_cap);
    let n = poisson_count(&mut rng::stream(seed, &[], "count"), mass)?;
    let mut rng = rng::stream(seed, &[], "points");
    let mut cfg = PointConfiguration::empty(d, Region::Window { radius: window_radius, time_cap });
    let mut dir = vec![0.0; k];
    for _ in 0..n {
        let r = window_radius * powf(rng.random::<f64>(), 1.0 / k as f64);
        uniform_direction(&mut rng, &mut dir);
        let h = time_cap * powf(rng.random::<f64>(), 1.0 / (1.0 + delta));
        cfg.spatial.extend(dir.iter().map(|u| r * u));
        cfg.time.push(h);
    }
    Ok(cfg)
}

/// Default truncation height for box sampling.
///
/// Solves for the height `H` at which the expected number of points above `H`
/// whose downward cone (cut to a corner orthant of the box) is empty drops below
/// `1e-6`. For `α <= 1` a point above `H` can only be extremal if that cone is
/// empty, so the bound is rigorous; for `α > 1` the height is enlarged by half.
pub fn default_time_cap(
    d: usize,
    alpha: f64,
    delta: f64,
    lambda: f64,
    rho0_min: f64,
    rho0_max: f64,
    volume: f64,
) -> f64 {
    let k = d - 1;
    let corner = powf(0.5, k as f64);
    let rate = lambda * rho0_min * corner;
    let mass_at = |h: f64| rate * downward_cone_mass(k, alpha, delta, h);
    let mut h = 1.0;
    for _ in 0..60 {
        // Required exponent: exp(−X) · (expected points near H) < 1e-6.
        let target = math::log(1e6 * (lambda * rho0_max * volume * powf(h, 1.0 + delta)).max(1.0)).max(1.0);
        // mass_at is a pure power of h, invert it.
        let unit = mass_at(1.0);
        let expo = k as f64 / alpha + 1.0 + delta;
        let next = powf(target / unit, 1.0 / expo);
        if (next - h).abs() < 1e-12 * h {
            h = next;
            break;
        }
        h = next;
    }
    if alpha > 1.0 {
        h * 1.5
    } else {
        h
    }
}
