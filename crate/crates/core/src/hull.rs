//! Convex-hull vertices of samples in the unit ball, computed two ways.
//!
//! [`hull_vertices`] decides vertex status directly (monotone chain in the plane,
//! convex-combination feasibility in general dimension). [`support_epigraph_extremal`]
//! maps each point `x` to the graph `g(u) = 1 − x · u` over unit directions `u`, which
//! equals `(1 − |x|) + |x| (1 − cos θ)` with θ the angle between `u` and `x/|x|`, and
//! marks `x` when its graph dips strictly below the lower envelope of the others.
//! A point is a hull vertex exactly when that happens, so the two must agree.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::extremality::envelope::{search, Family, Outcome, Search};
use crate::geometry::{lex_cmp, PointConfiguration, Region};
use crate::math::{self, acos, atan2, cos, sin, sqrt};
use crate::simplex::{convex_combination, Feasibility};

/// Points of the closed unit ball B_d, stored flat.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallSample {
    pub d: usize,
    pub coords: Vec<f64>,
}

impl BallSample {
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::arg("d", "must be >= 2"));
        }
        if !coords.len().is_multiple_of(d) {
            return Err(Error::arg(
                "points",
                format!("coordinate count {} is not a multiple of d = {d}", coords.len()),
            ));
        }
        let s = Self { d, coords };
        for i in 0..s.len() {
            let r = math::norm(s.point(i));
            if !(r <= 1.0 + 1e-12) {
                return Err(Error::arg("points", format!("point {i} has norm {r} > 1")));
            }
        }
        Ok(s)
    }

    pub fn from_points(d: usize, points: &[Vec<f64>]) -> Result<Self> {
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::arg("points", format!("every point needs {d} coordinates")));
        }
        Self::new(d, points.iter().flatten().copied().collect())
    }

    /// View of a ball configuration produced by the ball sampler.
    pub fn from_config(config: &PointConfiguration) -> Result<Self> {
        if !matches!(config.region, Region::Ball { .. } | Region::SphereShell { .. }) || config.stride != config.d {
            return Err(Error::arg("config", "expected a ball configuration"));
        }
        Self::new(config.d, config.spatial.clone())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HullResult {
    pub flags: Vec<bool>,
    /// Set when exact duplicates or boundary points that are convex combinations of
    /// other points were met. Such points are reported as non-vertices.
    pub degenerate: bool,
}

pub fn hull_vertices(sample: &BallSample) -> Result<HullResult> {
    hull_vertices_with(sample, &Sequential)
}

/// Vertex flags; uses the monotone chain for `d = 2` and the feasibility test otherwise.
pub fn hull_vertices_with(sample: &BallSample, exec: &impl Executor) -> Result<HullResult> {
    if sample.d == 2 {
        Ok(monotone_chain(sample))
    } else {
        hull_vertices_lp(sample, exec)
    }
}

fn monotone_chain(sample: &BallSample) -> HullResult {
    let n = sample.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(sample.point(a), sample.point(b)).then(a.cmp(&b)));
    let mut degenerate = false;
    let mut unique: Vec<usize> = Vec::with_capacity(n);
    let mut duplicated = vec![false; n];
    for &i in &order {
        if let Some(&last) = unique.last() {
            if sample.point(last) == sample.point(i) {
                duplicated[last] = true;
                duplicated[i] = true;
                degenerate = true;
                continue;
            }
        }
        unique.push(i);
    }
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (sample.point(o), sample.point(a), sample.point(b));
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut flags = vec![false; n];
    if unique.len() <= 2 {
        for &i in &unique {
            flags[i] = true;
        }
    } else {
        let mut hull: Vec<usize> = Vec::with_capacity(2 * unique.len());
        for pass in 0..2 {
            let start = hull.len();
            let seq: Vec<usize> = if pass == 0 { unique.clone() } else { unique.iter().rev().copied().collect() };
            for &p in &seq {
                while hull.len() >= start + 2 {
                    let c = cross(hull[hull.len() - 2], hull[hull.len() - 1], p);
                    if c > 0.0 {
                        break;
                    }
                    if c == 0.0 {
                        degenerate = true;
                    }
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        for &i in &hull {
            flags[i] = true;
        }
    }
    for i in 0..n {
        if duplicated[i] {
            flags[i] = false;
        }
    }
    HullResult { flags, degenerate }
}

/// Vertex flags from convex-combination feasibility, in any dimension.
///
/// Each point is first tested against a small set of directional extremes; a
/// separating hyperplane either certifies the point as a vertex or names the
/// most violating point, which joins the test set.
pub fn hull_vertices_lp(sample: &BallSample, exec: &impl Executor) -> Result<HullResult> {
    let n = sample.len();
    let seeds = directional_extremes(sample);
    let results = exec.map_indexed(n, |i| lp_vertex(sample, &seeds, i));
    let degenerate = results.iter().any(|r| r.1);
    Ok(HullResult { flags: results.into_iter().map(|r| r.0).collect(), degenerate })
}

fn directional_extremes(sample: &BallSample) -> Vec<usize> {
    let d = sample.d;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for k in 0..d {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[k] = s;
            dirs.push(v);
        }
    }
    for mask in 0..(1usize << d) {
        dirs.push((0..d).map(|k| if mask >> k & 1 == 1 { 1.0 } else { -1.0 }).collect());
    }
    let mut out: Vec<usize> = dirs
        .iter()
        .filter_map(|v| {
            (0..sample.len()).max_by(|&a, &b| {
                math::dot(sample.point(a), v).total_cmp(&math::dot(sample.point(b), v)).then(b.cmp(&a))
            })
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// (is vertex, met a degenerate tie)
fn lp_vertex(sample: &BallSample, seeds: &[usize], i: usize) -> (bool, bool) {
    let n = sample.len();
    let p = sample.point(i);
    let mut working: Vec<usize> = seeds.iter().copied().filter(|&j| j != i).collect();
    let mut degenerate = false;
    loop {
        let cols: Vec<&[f64]> = working.iter().map(|&j| sample.point(j)).collect();
        match convex_combination(&cols, p) {
            Feasibility::Feasible(w) => {
                // A combination that uses only points on a common face is a boundary case.
                if w.iter().filter(|v| **v > 1e-12).count() < sample.d + 1 {
                    degenerate = true;
                }
                return (false, degenerate);
            }
            Feasibility::Infeasible { direction, .. } => {
                let own = math::dot(p, &direction);
                let mut best: Option<(f64, usize)> = None;
                for j in (0..n).filter(|&j| j != i) {
                    let v = math::dot(sample.point(j), &direction);
                    if best.is_none_or(|(bv, _)| v > bv) {
                        best = Some((v, j));
                    }
                }
                let Some((value, j)) = best else { return (true, degenerate) };
                let scale = 1e-13 * (1.0 + math::norm(&direction));
                if value < own - scale {
                    return (true, degenerate);
                }
                if value <= own + scale {
                    degenerate = true;
                }
                if working.contains(&j) {
                    // Rounding left the separating hyperplane slightly wrong; decide on all points.
                    let all: Vec<&[f64]> = (0..n).filter(|&k| k != i).map(|k| sample.point(k)).collect();
                    return (matches!(convex_combination(&all, p), Feasibility::Infeasible { .. }), true);
                }
                working.push(j);
            }
        }
    }
}

/// Parameters of the spherical envelope search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereParams {
    /// Angular pitch of the initial grid.
    pub grid_step: f64,
    pub max_refine: u32,
    pub tol: f64,
    pub max_live: usize,
}

impl Default for SphereParams {
    fn default() -> Self {
        Self { grid_step: math::PI / 32.0, max_refine: 12, tol: 1e-9, max_live: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportResult {
    pub flags: Vec<bool>,
    pub unresolved: Vec<usize>,
}

/// Cap of unit directions: center, angular radius, and (for d = 2) the arc it came from,
/// or (for d = 3) the spherical triangle.
#[derive(Debug, Clone)]
pub(crate) struct Cap {
    center: Vec<f64>,
    radius: f64,
    shape: Shape,
}

#[derive(Debug, Clone)]
enum Shape {
    Arc { start: f64, width: f64 },
    Triangle([[f64; 3]; 3]),
}

struct SphereFamily<'a> {
    sample: &'a BallSample,
    radii: Vec<f64>,
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Angle between two nonzero vectors, accurate for small angles.
fn angle(a: &[f64], b: &[f64]) -> f64 {
    match a.len() {
        2 => {
            let cross = a[0] * b[1] - a[1] * b[0];
            atan2(cross.abs(), a[0] * b[0] + a[1] * b[1])
        }
        3 => {
            let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            atan2(math::norm(&c), math::dot(a, b))
        }
        _ => acos((math::dot(a, b) / (math::norm(a) * math::norm(b))).clamp(-1.0, 1.0)),
    }
}

fn arc_cap(start: f64, width: f64) -> Cap {
    let mid = start + width / 2.0;
    Cap { center: vec![cos(mid), sin(mid)], radius: width / 2.0, shape: Shape::Arc { start, width } }
}

fn triangle_cap(v: [[f64; 3]; 3]) -> Cap {
    let c = normalize3([v[0][0] + v[1][0] + v[2][0], v[0][1] + v[1][1] + v[2][1], v[0][2] + v[1][2] + v[2][2]]);
    let radius = v.iter().map(|p| angle(&c, p)).fold(0.0, f64::max);
    Cap { center: c.to_vec(), radius, shape: Shape::Triangle(v) }
}

fn icosahedron() -> Vec<Cap> {
    let phi = (1.0 + sqrt(5.0)) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let v: Vec<[f64; 3]> = raw.iter().map(|p| normalize3(*p)).collect();
    let faces = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    faces.iter().map(|f| triangle_cap([v[f[0]], v[f[1]], v[f[2]]])).collect()
}

impl Family for SphereFamily<'_> {
    type Cell = Cap;

    #[inline]
    fn value(&self, k: usize, u: &[f64]) -> f64 {
        1.0 - math::dot(self.sample.point(k), u)
    }

    fn bounds(&self, k: usize, cell: &Cap) -> (f64, f64) {
        let r = self.radii[k];
        let theta = angle(&cell.center, self.sample.point(k));
        let near = (theta - cell.radius).max(0.0);
        let far = (theta + cell.radius).min(math::PI);
        (1.0 - r * cos(near), 1.0 - r * cos(far))
    }

    fn witness(&self, cell: &Cap, out: &mut Vec<f64>) -> bool {
        out.clear();
        out.extend_from_slice(&cell.center);
        true
    }

    fn split(&self, cell: &Cap, out: &mut Vec<Cap>) {
        match &cell.shape {
            Shape::Arc { start, width } => {
                let w = width / 2.0;
                out.push(arc_cap(*start, w));
                out.push(arc_cap(start + w, w));
            }
            Shape::Triangle([a, b, c]) => {
                let mid = |p: &[f64; 3], q: &[f64; 3]| normalize3([p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
                let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                out.push(triangle_cap([*a, ab, ca]));
                out.push(triangle_cap([ab, *b, bc]));
                out.push(triangle_cap([ca, bc, *c]));
                out.push(triangle_cap([ab, bc, ca]));
            }
        }
    }
}

/// Support-epigraph extremality for `d ∈ {2, 3}`.
pub fn support_epigraph_extremal(sample: &BallSample, params: &SphereParams) -> Result<SupportResult> {
    support_epigraph_extremal_with(sample, params, &Sequential)
}

pub fn support_epigraph_extremal_with(
    sample: &BallSample,
    params: &SphereParams,
    exec: &impl Executor,
) -> Result<SupportResult> {
    if sample.d > 3 {
        return Err(Error::Method(format!(
            "support-epigraph search is implemented for d = 2 and d = 3, got d = {}",
            sample.d
        )));
    }
    if !(params.grid_step > 0.0) || !(params.tol >= 0.0) || params.max_live == 0 {
        return Err(Error::arg("grid_step", "grid parameters must be positive"));
    }
    let radii: Vec<f64> = (0..sample.len()).map(|i| math::norm(sample.point(i))).collect();
    if let Some(i) = radii.iter().position(|r| *r == 0.0) {
        return Err(Error::arg("points", format!("point {i} is at the origin")));
    }
    let fam = SphereFamily { sample, radii };
    let roots: Vec<Cap> = if sample.d == 2 {
        (0..8).map(|k| arc_cap(k as f64 * math::PI / 4.0, math::PI / 4.0)).collect()
    } else {
        icosahedron()
    };
    let root_width = 2.0 * roots[0].radius;
    let grid_levels = if root_width > params.grid_step {
        math::ceil(math::log(root_width / params.grid_step) / core::f64::consts::LN_2) as u32
    } else {
        0
    };
    let s = Search {
        tol: params.tol,
        max_level: grid_levels + params.max_refine,
        max_live: params.max_live,
        t_lo: f64::NEG_INFINITY,
        t_hi: f64::INFINITY,
    };
    let outcomes = exec.map_indexed(sample.len(), |i| {
        let apex: Vec<f64> = sample.point(i).iter().map(|v| v / fam.radii[i]).collect();
        // Strongest competitors (largest support value in the apex direction) first.
        let mut comps: Vec<(f64, usize)> =
            (0..sample.len()).filter(|&j| j != i).map(|j| (fam.value(j, &apex), j)).collect();
        comps.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let comps: Vec<usize> = comps.into_iter().map(|(_, j)| j).collect();
        // The apex direction is the most likely witness; try it before the grid.
        let apex_margin =
            comps.iter().map(|&j| fam.value(j, &apex)).fold(f64::INFINITY, f64::min) - fam.value(i, &apex);
        if apex_margin > s.tol {
            return Outcome::Extremal;
        }
        search(&fam, i, &comps, roots.clone(), &s)
    });
    let unresolved =
        outcomes.iter().enumerate().filter(|(_, o)| matches!(o, Outcome::Unresolved { .. })).map(|(i, _)| i).collect();
    Ok(SupportResult { flags: outcomes.iter().map(|o| o.flag()).collect(), unresolved })
}

/// `Σ_{vertices} f(x)`.
pub fn hull_vertex_measure(sample: &BallSample, flags: &[bool], f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    if flags.len() != sample.len() {
        return Err(Error::arg("flags", "length must match the sample"));
    }
    Ok((0..sample.len()).filter(|&i| flags[i]).map(|i| f(sample.point(i))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_poisson_ball, Rho0};

    fn disk(n: usize, seed: u64) -> BallSample {
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            s = crate::rng::mix64(s);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut pts = Vec::new();
        while pts.len() < n {
            let (x, y) = (2.0 * next() - 1.0, 2.0 * next() - 1.0);
            if x * x + y * y <= 1.0 && x * x + y * y > 0.0 {
                pts.push(vec![x, y]);
            }
        }
        BallSample::from_points(2, &pts).unwrap()
    }

    /// Point i is a vertex iff the directions to the other points leave an angular gap above π.
    fn gap_oracle(sample: &BallSample, i: usize) -> bool {
        let p = sample.point(i);
        let mut angles: Vec<f64> = (0..sample.len())
            .filter(|&j| j != i)
            .map(|j| {
                let q = sample.point(j);
                (q[1] - p[1]).atan2(q[0] - p[0])
            })
            .collect();
        if angles.is_empty() {
            return true;
        }
        angles.sort_by(f64::total_cmp);
        let mut gap = angles[0] + 2.0 * math::PI - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap > math::PI
    }

    #[test]
    fn triangle_and_centroid() {
        let s = BallSample::from_points(2, &[vec![0.5, 0.0], vec![-0.25, 0.4], vec![-0.25, -0.4], vec![0.0, 0.0]]);
        let s = s.unwrap();
        let r = hull_vertices(&s).unwrap();
        assert_eq!(r.flags, vec![true, true, true, false]);
        assert_eq!(hull_vertices_lp(&s, &Sequential).unwrap().flags, r.flags);
        let m = hull_vertex_measure(&s, &r.flags, |x| x[0]).unwrap();
        assert!((m - 0.0).abs() < 1e-15);
        assert_eq!(hull_vertex_measure(&s, &r.flags, |_| 1.0).unwrap(), 3.0);
        assert_eq!(hull_vertex_measure(&s, &r.flags, |_| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn chain_lp_and_gap_oracle_agree_in_the_plane() {
        for seed in 0..500 {
            let s = disk(30, seed);
            let chain = hull_vertices(&s).unwrap();
            let lp = hull_vertices_lp(&s, &Sequential).unwrap();
            assert_eq!(chain.flags, lp.flags, "seed {seed}");
            for i in 0..s.len() {
                assert_eq!(chain.flags[i], gap_oracle(&s, i), "seed {seed} point {i}");
            }
        }
    }

    #[test]
    fn collinear_and_duplicate_points_are_not_vertices() {
        let s = BallSample::from_points(2, &[vec![-0.5, 0.0], vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let r = hull_vertices(&s).unwrap();
        assert_eq!(r.flags, vec![true, false, true, true]);
        assert!(r.degenerate);
        assert_eq!(hull_vertices_lp(&s, &Sequential).unwrap().flags, r.flags);
        let dup =
            BallSample::from_points(2, &[vec![0.5, 0.0], vec![0.5, 0.0], vec![0.0, 0.5], vec![-0.5, -0.5]]).unwrap();
        let r = hull_vertices(&dup).unwrap();
        assert_eq!(r.flags, vec![false, false, true, true]);
        assert_eq!(hull_vertices_lp(&dup, &Sequential).unwrap().flags, r.flags);
    }

    #[test]
    fn lp_matches_brute_force_in_three_dimensions() {
        let c = 1.0 / math::unit_ball_volume(3);
        for seed in 0..20 {
            let cfg = sample_poisson_ball(3, 0.0, &Rho0::Constant(c), 40.0, seed).unwrap();
            let s = BallSample::from_config(&cfg).unwrap();
            let fast = hull_vertices(&s).unwrap();
            for i in 0..s.len() {
                let others: Vec<&[f64]> = (0..s.len()).filter(|&j| j != i).map(|j| s.point(j)).collect();
                let brute = matches!(convex_combination(&others, s.point(i)), Feasibility::Infeasible { .. });
                assert_eq!(fast.flags[i], brute, "seed {seed} point {i}");
            }
        }
    }

    #[test]
    fn support_epigraph_square_plus_inner_point() {
        let r = 0.9;
        let inner = 0.1 / 2f64.sqrt();
        let s =
            BallSample::from_points(2, &[vec![r, 0.0], vec![0.0, r], vec![-r, 0.0], vec![0.0, -r], vec![inner, inner]])
                .unwrap();
        // Dense angular oracle at pitch 1e-4.
        let margin = |i: usize| {
            (0..=62832)
                .map(|k| {
                    let t = k as f64 * 1e-4;
                    let u = [t.cos(), t.sin()];
                    let g = |j: usize| 1.0 - math::dot(s.point(j), &u);
                    (0..5).filter(|&j| j != i).map(g).fold(f64::INFINITY, f64::min) - g(i)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let oracle: Vec<bool> = (0..5).map(|i| margin(i) > 0.0).collect();
        assert_eq!(oracle, vec![true, true, true, true, false]);
        let res = support_epigraph_extremal(&s, &SphereParams::default()).unwrap();
        assert_eq!(res.flags, oracle);
        assert!(res.unresolved.is_empty());
    }

    #[test]
    fn support_epigraph_edge_cases() {
        let one = BallSample::from_points(2, &[vec![0.3, 0.1]]).unwrap();
        assert_eq!(support_epigraph_extremal(&one, &SphereParams::default()).unwrap().flags, vec![true]);
        let origin = BallSample::from_points(2, &[vec![0.0, 0.0], vec![0.3, 0.1]]).unwrap();
        assert!(support_epigraph_extremal(&origin, &SphereParams::default()).is_err());
        let four = BallSample::from_points(4, &[vec![0.1, 0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(support_epigraph_extremal(&four, &SphereParams::default()), Err(Error::Method(_))));
    }

    #[test]
    fn support_epigraph_matches_hull_in_two_and_three_dimensions() {
        for seed in 0..100 {
            let s = disk(25, 1000 + seed);
            let hull = hull_vertices(&s).unwrap();
            let sup = support_epigraph_extremal(&s, &SphereParams::default()).unwrap();
            for i in 0..s.len() {
                if !sup.unresolved.contains(&i) {
                    assert_eq!(hull.flags[i], sup.flags[i], "seed {seed} point {i}");
                }
            }
        }
        let c = 1.0 / math::unit_ball_volume(3);
        for seed in 0..20 {
            let cfg = sample_poisson_ball(3, 0.0, &Rho0::Constant(c), 30.0, 50 + seed).unwrap();
            let s = BallSample::from_config(&cfg).unwrap();
            let hull = hull_vertices(&s).unwrap();
            let sup = support_epigraph_extremal(&s, &SphereParams::default()).unwrap();
            for i in 0..s.len() {
                if !sup.unresolved.contains(&i) {
                    assert_eq!(hull.flags[i], sup.flags[i], "3d seed {seed} point {i}");
                }
            }
        }
    }
}
