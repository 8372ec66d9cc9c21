use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::envelope::{
    collect, competitors, default_search_radius, search, search_params, Cube, EnvelopeParams, EuclideanFamily, Outcome,
    SpatialDomain,
};
use super::{require_space_time, ExtremalityResult};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::geometry::{PointConfiguration, PsiSpec};
use crate::math;

/// Axis-aligned box `Π [lo_k, hi_k] × [t_lo, t_hi]` in space-time. Infinite bounds are allowed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpaceTimeBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl SpaceTimeBox {
    pub fn contains(&self, x: &[f64], h: f64) -> bool {
        h >= self.t_lo && h <= self.t_hi && x.iter().zip(&self.lo).zip(&self.hi).all(|((v, a), b)| v >= a && v <= b)
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.lo.len() != k || self.hi.len() != k {
            return Err(Error::arg("domain", format!("expected {k} spatial bounds")));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| !(a <= b)) || !(self.t_lo <= self.t_hi) {
            return Err(Error::arg("domain", "lower bounds must not exceed upper bounds"));
        }
        Ok(())
    }
}

/// One point of the envelope test with witnesses confined to `domain` and the time
/// window `[t_lo, t_hi]`, against the competitors accepted by `admit`.
fn restricted_point(
    config: &PointConfiguration,
    psi: &PsiSpec,
    params: &EnvelopeParams,
    radius: f64,
    i: usize,
    domain: SpatialDomain,
    window: (f64, f64),
    admit: impl FnMut(usize) -> bool,
) -> Outcome {
    let half = match &domain {
        SpatialDomain::Ball { radius: r, .. } => r.min(radius),
        _ => radius,
    };
    let fam = EuclideanFamily::new(config, psi, domain);
    let mut s = search_params(params, half);
    s.t_lo = window.0;
    s.t_hi = window.1;
    let root = Cube { center: config.x(i).to_vec(), half };
    let comps = competitors(&fam, i, &root, s.tol, admit);
    search(&fam, i, &comps, vec![root], &s)
}

/// Overlap functional restricted to a space-time box: only points of the box compete,
/// and a witness is a location `u` of the box's spatial part where
/// `max(f_i(u), t_lo) <= t_hi` and `max(f_i(u), t_lo) < f_j(u)` for every competitor.
pub fn xi_restricted(
    config: &PointConfiguration,
    psi: &PsiSpec,
    domain: &SpaceTimeBox,
    params: &EnvelopeParams,
) -> Result<ExtremalityResult> {
    xi_restricted_with(config, psi, domain, params, &Sequential)
}

pub fn xi_restricted_with(
    config: &PointConfiguration,
    psi: &PsiSpec,
    domain: &SpaceTimeBox,
    params: &EnvelopeParams,
    exec: &impl Executor,
) -> Result<ExtremalityResult> {
    params.validate()?;
    require_space_time(config)?;
    domain.validate(config.stride)?;
    let radius = params.search_radius.unwrap_or_else(|| default_search_radius(config, psi));
    let outcomes = exec.map_indexed(config.len(), |i| {
        restricted_point(
            config,
            psi,
            params,
            radius,
            i,
            SpatialDomain::Box { lo: domain.lo.clone(), hi: domain.hi.clone() },
            (domain.t_lo, domain.t_hi),
            |j| domain.contains(config.x(j), config.h(j)),
        )
    });
    Ok(collect(outcomes, params.method(radius)))
}

fn cone_exact(psi: &PsiSpec) -> bool {
    matches!(psi, PsiSpec::PowerLaw { alpha } if *alpha <= 1.0)
}

/// Distance from `i` to the nearest point of its downward cone (infinite if empty).
fn nearest_cone_distance(config: &PointConfiguration, psi: &PsiSpec, i: usize) -> f64 {
    let (x, h) = (config.x(i), config.h(i));
    (0..config.len())
        .filter(|&j| j != i)
        .filter_map(|j| {
            let l = math::dist(x, config.x(j));
            (config.h(j) <= h - psi.eval_unchecked(l)).then_some(l)
        })
        .fold(f64::INFINITY, f64::min)
}

/// The functional restricted to the cylinder `B(x_i, r) × [0, ∞)`.
///
/// For power laws with `α <= 1` this is decided exactly by looking for a downward-cone
/// point within distance `r`; otherwise the envelope search runs inside the cylinder.
pub fn xi_finite_range(
    config: &PointConfiguration,
    psi: &PsiSpec,
    r: f64,
    i: usize,
    params: &EnvelopeParams,
) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::arg("r", format!("must be > 0, got {r}")));
    }
    if i >= config.len() {
        return Err(Error::arg("index", format!("{i} out of range for {} points", config.len())));
    }
    params.validate()?;
    require_space_time(config)?;
    if cone_exact(psi) {
        return Ok(nearest_cone_distance(config, psi, i) > r);
    }
    let radius = params.search_radius.unwrap_or_else(|| default_search_radius(config, psi));
    Ok(finite_range_outcome(config, psi, params, radius, r, i).flag())
}

fn finite_range_outcome(
    config: &PointConfiguration,
    psi: &PsiSpec,
    params: &EnvelopeParams,
    radius: f64,
    r: f64,
    i: usize,
) -> Outcome {
    let center = config.x(i).to_vec();
    restricted_point(
        config,
        psi,
        params,
        radius,
        i,
        SpatialDomain::Ball { center: center.clone(), radius: r },
        (0.0, f64::INFINITY),
        |j| math::dist(config.x(j), &center) <= r,
    )
}

/// Smallest grid radius from which every larger grid radius gives the unrestricted value.
///
/// Returns `f64::INFINITY` if even the largest grid radius disagrees with the
/// unrestricted value (possible only for envelope searches truncated by the search radius).
pub fn localization_radius(
    config: &PointConfiguration,
    psi: &PsiSpec,
    i: usize,
    r_grid: &[f64],
    params: &EnvelopeParams,
) -> Result<f64> {
    if r_grid.is_empty() || r_grid.windows(2).any(|w| !(w[1] > w[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::arg("r_grid", "must be a nonempty increasing list of positive radii"));
    }
    if i >= config.len() {
        return Err(Error::arg("index", format!("{i} out of range for {} points", config.len())));
    }
    params.validate()?;
    require_space_time(config)?;
    let diameter = config.spatial_diameter();
    if r_grid[r_grid.len() - 1] < diameter {
        return Err(Error::arg(
            "r_grid",
            format!("largest radius {} is below the spatial diameter {diameter}", r_grid[r_grid.len() - 1]),
        ));
    }
    if cone_exact(psi) {
        let nearest = nearest_cone_distance(config, psi, i);
        if nearest.is_infinite() {
            return Ok(r_grid[0]);
        }
        return Ok(r_grid.iter().copied().find(|&r| r >= nearest).unwrap_or(f64::INFINITY));
    }
    let radius = params.search_radius.unwrap_or_else(|| default_search_radius(config, psi));
    let fam = EuclideanFamily::new(config, psi, SpatialDomain::All);
    let s = search_params(params, radius);
    let root = Cube { center: config.x(i).to_vec(), half: radius };
    let comps = competitors(&fam, i, &root, s.tol, |_| true);
    let full = search(&fam, i, &comps, vec![root], &s).flag();
    let mut answer = f64::INFINITY;
    for &r in r_grid.iter().rev() {
        if finite_range_outcome(config, psi, params, radius, r, i).flag() != full {
            break;
        }
        answer = r;
    }
    Ok(answer)
}
