//! Branch-and-bound search for points where one graph lies strictly below the
//! lower envelope of a family of radial graphs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{require_space_time, ExtremalityResult, Method};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::geometry::{PointConfiguration, PsiSpec};
use crate::math;

/// A family of graphs `f_k` over a space of cells, optionally restricted to a witness domain.
pub(crate) trait Family {
    type Cell;

    fn value(&self, k: usize, u: &[f64]) -> f64;
    /// Lower and upper bounds of `f_k` over the cell.
    fn bounds(&self, k: usize, cell: &Self::Cell) -> (f64, f64);
    /// Writes a point of `cell ∩ domain` (or of the domain close to the cell) into `out`;
    /// returns `false` when the cell misses the domain.
    fn witness(&self, cell: &Self::Cell, out: &mut Vec<f64>) -> bool;
    fn split(&self, cell: &Self::Cell, out: &mut Vec<Self::Cell>);
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Search {
    pub tol: f64,
    pub max_level: u32,
    pub max_live: usize,
    /// Time window of a restricted test: witnesses need `max(f_i, t_lo) <= t_hi`.
    pub t_lo: f64,
    pub t_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    Extremal,
    Covered,
    /// No certificate; `best` is the largest margin seen.
    Unresolved {
        best: f64,
    },
}

impl Outcome {
    pub fn flag(self) -> bool {
        match self {
            Outcome::Extremal => true,
            Outcome::Covered => false,
            Outcome::Unresolved { best } => best > 0.0,
        }
    }
}

/// Margin `min_j f_j(u) − max(f_i(u), t_lo)`, or `None` when `u` is not admissible.
/// Evaluation stops once the margin is certainly below `−tol`; the value returned
/// is then an upper bound of the true margin.
fn margin<F: Family>(fam: &F, i: usize, comps: &[usize], u: &[f64], s: &Search) -> Option<f64> {
    let fi = fam.value(i, u).max(s.t_lo);
    if fi > s.t_hi {
        return None;
    }
    let mut m = f64::INFINITY;
    for &j in comps {
        m = m.min(fam.value(j, u) - fi);
        if m < -s.tol {
            break;
        }
    }
    Some(m)
}

pub(crate) fn search<F: Family>(fam: &F, i: usize, comps: &[usize], roots: Vec<F::Cell>, s: &Search) -> Outcome {
    let mut best = f64::NEG_INFINITY;
    let mut live = roots;
    let mut scored: Vec<(f64, F::Cell)> = Vec::new();
    let mut next: Vec<F::Cell> = Vec::new();
    let mut buf = Vec::new();
    for level in 0..=s.max_level {
        scored.clear();
        for cell in live.drain(..) {
            if !fam.witness(&cell, &mut buf) {
                continue;
            }
            if let Some(m) = margin(fam, i, comps, &buf, s) {
                best = best.max(m);
                if m > s.tol {
                    return Outcome::Extremal;
                }
            }
            let lower_i = fam.bounds(i, &cell).0.max(s.t_lo);
            if lower_i > s.t_hi {
                continue;
            }
            let mut ub = f64::INFINITY;
            for &j in comps {
                ub = ub.min(fam.bounds(j, &cell).1 - lower_i);
                if ub <= 0.0 {
                    break;
                }
            }
            if ub > 0.0 {
                scored.push((ub, cell));
            }
        }
        if scored.is_empty() {
            return Outcome::Covered;
        }
        if level == s.max_level {
            break;
        }
        if scored.len() > s.max_live {
            scored.sort_by(|a, b| b.0.total_cmp(&a.0));
            scored.truncate(s.max_live);
        }
        for (_, cell) in scored.drain(..) {
            fam.split(&cell, &mut next);
        }
        core::mem::swap(&mut live, &mut next);
    }
    if best < -s.tol {
        Outcome::Covered
    } else {
        Outcome::Unresolved { best }
    }
}

/// Parameters of the envelope search. `None` fields take data-dependent defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeParams {
    pub search_radius: Option<f64>,
    pub grid_step: Option<f64>,
    pub max_refine: u32,
    /// Margin tolerance for sign decisions.
    pub tol: f64,
    /// Cap on the number of cells refined per level.
    pub max_live: usize,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        Self { search_radius: None, grid_step: None, max_refine: 12, tol: 1e-9, max_live: 4096 }
    }
}

impl EnvelopeParams {
    pub fn new(search_radius: f64, grid_step: f64, max_refine: u32) -> Result<Self> {
        let p = Self { search_radius: Some(search_radius), grid_step: Some(grid_step), max_refine, ..Self::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.search_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::arg("search_radius", format!("must be > 0, got {r}")));
            }
        }
        if let Some(g) = self.grid_step {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::arg("grid_step", format!("must be > 0, got {g}")));
            }
        }
        if !(self.tol >= 0.0) {
            return Err(Error::arg("tol", "must be >= 0"));
        }
        if self.max_live == 0 {
            return Err(Error::arg("max_live", "must be > 0"));
        }
        Ok(())
    }

    /// Number of halvings from the root half-width down to the grid step.
    pub(crate) fn grid_levels(&self, root_half_width: f64) -> u32 {
        let step = self.grid_step.unwrap_or(root_half_width / 8.0);
        let ratio = 2.0 * root_half_width / step;
        if ratio <= 1.0 {
            0
        } else {
            math::ceil(math::log(ratio) / core::f64::consts::LN_2) as u32
        }
    }

    pub(crate) fn method(&self, search_radius: f64) -> Method {
        Method::Envelope { grid_step: self.grid_step.unwrap_or(search_radius / 8.0), max_refine: self.max_refine }
    }
}

/// `3 · (max time)^{1/α} + spatial diameter`.
pub fn default_search_radius(config: &PointConfiguration, psi: &PsiSpec) -> f64 {
    let reach = match psi.inverse(config.max_time().min(psi.range_max())) {
        Ok(l) => l,
        Err(_) => psi.domain_max(),
    };
    let r = 3.0 * reach + config.spatial_diameter();
    if r > 0.0 {
        r
    } else {
        1.0
    }
}

/// Where witnesses may lie.
#[derive(Debug, Clone)]
pub(crate) enum SpatialDomain {
    All,
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

/// Axis-aligned cube: center and half-width.
#[derive(Debug, Clone)]
pub(crate) struct Cube {
    pub center: Vec<f64>,
    pub half: f64,
}

pub(crate) struct EuclideanFamily<'a> {
    pub config: &'a PointConfiguration,
    pub psi: &'a PsiSpec,
    pub domain: SpatialDomain,
    cap: f64,
    sqrt_k: f64,
}

impl<'a> EuclideanFamily<'a> {
    pub fn new(config: &'a PointConfiguration, psi: &'a PsiSpec, domain: SpatialDomain) -> Self {
        Self { config, psi, domain, cap: psi.domain_max(), sqrt_k: math::sqrt(config.stride as f64) }
    }

    /// ψ extended by its last value beyond a bounded domain.
    #[inline]
    fn psi(&self, l: f64) -> f64 {
        self.psi.eval_unchecked(l.min(self.cap))
    }

    pub fn radius(&self, cube: &Cube) -> f64 {
        cube.half * self.sqrt_k
    }
}

impl Family for EuclideanFamily<'_> {
    type Cell = Cube;

    #[inline]
    fn value(&self, k: usize, u: &[f64]) -> f64 {
        self.config.h(k) + self.psi(math::dist(u, self.config.x(k)))
    }

    fn bounds(&self, k: usize, cell: &Cube) -> (f64, f64) {
        let d = math::dist(&cell.center, self.config.x(k));
        let r = self.radius(cell);
        let h = self.config.h(k);
        (h + self.psi((d - r).max(0.0)), h + self.psi(d + r))
    }

    fn witness(&self, cell: &Cube, out: &mut Vec<f64>) -> bool {
        out.clear();
        out.extend_from_slice(&cell.center);
        match &self.domain {
            SpatialDomain::All => true,
            SpatialDomain::Box { lo, hi } => {
                for (k, v) in out.iter_mut().enumerate() {
                    if cell.center[k] + cell.half < lo[k] || cell.center[k] - cell.half > hi[k] {
                        return false;
                    }
                    *v = v.clamp(lo[k], hi[k]);
                }
                true
            }
            SpatialDomain::Ball { center, radius } => {
                let d = math::dist(&cell.center, center);
                if d > radius + self.radius(cell) {
                    return false;
                }
                if d > *radius {
                    let t = radius / d;
                    for (v, c) in out.iter_mut().zip(center) {
                        *v = c + (*v - c) * t;
                    }
                }
                true
            }
        }
    }

    fn split(&self, cell: &Cube, out: &mut Vec<Cube>) {
        let k = cell.center.len();
        let q = cell.half / 2.0;
        for mask in 0..(1usize << k) {
            let center = (0..k).map(|j| cell.center[j] + if mask >> j & 1 == 1 { q } else { -q }).collect();
            out.push(Cube { center, half: q });
        }
    }
}

/// Competitors of `i` that can matter inside the root cube, ordered by their
/// value at the apex (strongest coverers first). A competitor is dropped only when
/// it exceeds `f_i` by more than `2·tol` on the whole root, so dropping it never
/// changes a sign decision.
pub(crate) fn competitors(
    fam: &EuclideanFamily<'_>,
    i: usize,
    root: &Cube,
    tol: f64,
    mut admit: impl FnMut(usize) -> bool,
) -> Vec<usize> {
    let upper_i = fam.bounds(i, root).1;
    let apex = fam.config.x(i);
    let mut keyed: Vec<(f64, usize)> = (0..fam.config.len())
        .filter(|&j| j != i && admit(j))
        .filter(|&j| fam.bounds(j, root).0 <= upper_i + 2.0 * tol)
        .map(|j| (fam.value(j, apex), j))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, j)| j).collect()
}

pub(crate) fn search_params(params: &EnvelopeParams, root_half: f64) -> Search {
    Search {
        tol: params.tol,
        max_level: params.grid_levels(root_half) + params.max_refine,
        max_live: params.max_live,
        t_lo: f64::NEG_INFINITY,
        t_hi: f64::INFINITY,
    }
}

pub fn xi_envelope(config: &PointConfiguration, psi: &PsiSpec, params: &EnvelopeParams) -> Result<ExtremalityResult> {
    xi_envelope_with(config, psi, params, &Sequential)
}

pub fn xi_envelope_with(
    config: &PointConfiguration,
    psi: &PsiSpec,
    params: &EnvelopeParams,
    exec: &impl Executor,
) -> Result<ExtremalityResult> {
    params.validate()?;
    require_space_time(config)?;
    let radius = params.search_radius.unwrap_or_else(|| default_search_radius(config, psi));
    let fam = EuclideanFamily::new(config, psi, SpatialDomain::All);
    let s = search_params(params, radius);
    let outcomes = exec.map_indexed(config.len(), |i| {
        let root = Cube { center: config.x(i).to_vec(), half: radius };
        let comps = competitors(&fam, i, &root, s.tol, |_| true);
        search(&fam, i, &comps, vec![root], &s)
    });
    Ok(collect(outcomes, params.method(radius)))
}

/// Envelope outcome of the single point `i`.
pub(crate) fn envelope_point(config: &PointConfiguration, psi: &PsiSpec, params: &EnvelopeParams, i: usize) -> Outcome {
    let radius = params.search_radius.unwrap_or_else(|| default_search_radius(config, psi));
    let fam = EuclideanFamily::new(config, psi, SpatialDomain::All);
    let s = search_params(params, radius);
    let root = Cube { center: config.x(i).to_vec(), half: radius };
    let comps = competitors(&fam, i, &root, s.tol, |_| true);
    search(&fam, i, &comps, vec![root], &s)
}

pub(crate) fn collect(outcomes: Vec<Outcome>, method: Method) -> ExtremalityResult {
    let unresolved =
        outcomes.iter().enumerate().filter(|(_, o)| matches!(o, Outcome::Unresolved { .. })).map(|(i, _)| i).collect();
    ExtremalityResult { flags: outcomes.iter().map(|o| o.flag()).collect(), method, unresolved }
}
