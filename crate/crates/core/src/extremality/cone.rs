use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{require_space_time, ExtremalityResult, Method};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::geometry::{PointConfiguration, PsiSpec};
use crate::index::TimeSortedGrid;
use crate::math;

const BRUTE_FORCE_LIMIT: usize = 64;

fn check_psi(psi: &PsiSpec) -> Result<()> {
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha <= 1.0 => Ok(()),
        PsiSpec::PowerLaw { alpha } => Err(Error::Method(format!(
            "the downward-cone test equals the overlap functional only for power laws with alpha <= 1 \
             (got alpha = {alpha}); use the envelope method"
        ))),
        _ => Err(Error::Method("the downward-cone test needs a power-law profile".into())),
    }
}

/// `j` lies in the closed downward cone of `i`.
#[inline]
fn below(config: &PointConfiguration, psi: &PsiSpec, i: usize, j: usize) -> bool {
    config.h(j) <= config.h(i) - psi.eval_unchecked(math::dist(config.x(i), config.x(j)))
}

/// O(n²) reference implementation.
pub fn xi_downward_cone_brute(config: &PointConfiguration, psi: &PsiSpec) -> Result<ExtremalityResult> {
    check_psi(psi)?;
    require_space_time(config)?;
    let n = config.len();
    let flags = (0..n).map(|i| !(0..n).any(|j| j != i && below(config, psi, i, j))).collect();
    Ok(ExtremalityResult { flags, method: Method::DownwardCone, unresolved: Vec::new() })
}

pub fn xi_downward_cone(config: &PointConfiguration, psi: &PsiSpec) -> Result<ExtremalityResult> {
    xi_downward_cone_with(config, psi, &Sequential)
}

/// Grid-accelerated cone test; returns exactly the brute-force flags.
pub fn xi_downward_cone_with(
    config: &PointConfiguration,
    psi: &PsiSpec,
    exec: &impl Executor,
) -> Result<ExtremalityResult> {
    check_psi(psi)?;
    require_space_time(config)?;
    let n = config.len();
    if n <= BRUTE_FORCE_LIMIT {
        return xi_downward_cone_brute(config, psi);
    }
    let grid = TimeSortedGrid::build(config, 2.0);
    let flags = exec.map_indexed(n, |i| nearest_cone_point(config, psi, &grid, i, false).is_none());
    Ok(ExtremalityResult { flags, method: Method::DownwardCone, unresolved: Vec::new() })
}

/// Some point of the downward cone of `i` (the nearest one when `nearest` is set),
/// with its spatial distance.
pub(crate) fn nearest_cone_point(
    config: &PointConfiguration,
    psi: &PsiSpec,
    grid: &TimeSortedGrid,
    i: usize,
    nearest: bool,
) -> Option<(usize, f64)> {
    let g = &grid.geometry;
    let x = config.x(i);
    let h = config.h(i);
    // A cone point at spatial distance l needs ψ(l) <= h; shrink l slightly so
    // the cutoff never excludes a pair the exact predicate accepts.
    let too_far = |l: f64| l > 0.0 && psi.eval_unchecked(l * (1.0 - 1e-12)) > h;
    let mut center = vec![0isize; g.k()];
    g.coords(x, &mut center);
    let mut best: Option<(usize, f64)> = None;
    for ring in 0..=g.max_ring(&center) {
        let inner = (ring as f64 - 1.0).max(0.0) * g.cell;
        if too_far(inner) || best.is_some_and(|(_, d)| d < inner) {
            break;
        }
        let stop = g.for_each_in_ring(&center, ring, |cell| {
            let md = g.min_dist(x, cell);
            if too_far(md) || best.is_some_and(|(_, d)| d < md) {
                return false;
            }
            for &j in grid.bucket(cell) {
                if config.h(j) > h {
                    break;
                }
                if j != i && below(config, psi, i, j) {
                    let d = math::dist(x, config.x(j));
                    if best.is_none_or(|(bj, bd)| d < bd || (d == bd && j < bj)) {
                        best = Some((j, d));
                    }
                    if !nearest {
                        return true;
                    }
                }
            }
            false
        });
        if stop {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Region, SpaceTimePoint};
    use crate::sampling::{sample_poisson_box, DensitySpec, Rho0};

    fn cfg2(points: &[(f64, f64)]) -> PointConfiguration {
        let pts: Vec<SpaceTimePoint> = points.iter().map(|&(x, h)| SpaceTimePoint::new(vec![x], h).unwrap()).collect();
        PointConfiguration::from_points(2, &pts, Region::Unspecified).unwrap()
    }

    #[test]
    fn single_point_is_extremal() {
        let r = xi_downward_cone(&cfg2(&[(0.3, 0.7)]), &PsiSpec::PowerLaw { alpha: 1.0 }).unwrap();
        assert_eq!(r.flags, vec![true]);
        assert!(r.unresolved.is_empty());
    }

    #[test]
    fn point_below_the_cone_covers() {
        let r = xi_downward_cone(&cfg2(&[(0.0, 0.0), (0.5, 1.0)]), &PsiSpec::PowerLaw { alpha: 1.0 }).unwrap();
        assert_eq!(r.flags, vec![true, false]);
    }

    #[test]
    fn rejects_convex_profiles() {
        let cfg = cfg2(&[(0.0, 0.0)]);
        assert!(matches!(xi_downward_cone(&cfg, &PsiSpec::PowerLaw { alpha: 2.0 }), Err(Error::Method(_))));
        assert!(matches!(xi_downward_cone(&cfg, &PsiSpec::SphericalCap), Err(Error::Method(_))));
    }

    #[test]
    fn grid_index_matches_brute_force() {
        for (d, alpha, seed) in [(2usize, 1.0, 1u64), (2, 0.5, 2), (3, 1.0, 3), (3, 0.7, 4), (4, 1.0, 5)] {
            let k = d - 1;
            let spec = DensitySpec::new_box(vec![0.0; k], vec![1.0; k], Rho0::Constant(1.0), 0.0, 0.3).unwrap();
            let cfg = sample_poisson_box(&spec, 3000.0, seed).unwrap();
            let psi = PsiSpec::PowerLaw { alpha };
            let fast = xi_downward_cone(&cfg, &psi).unwrap();
            let slow = xi_downward_cone_brute(&cfg, &psi).unwrap();
            assert_eq!(fast.flags, slow.flags, "d={d} alpha={alpha}");
        }
    }

    #[test]
    fn nearest_cone_point_is_nearest() {
        let spec = DensitySpec::new_box(vec![0.0], vec![1.0], Rho0::Constant(1.0), 0.0, 1.0).unwrap();
        let cfg = sample_poisson_box(&spec, 400.0, 9).unwrap();
        let psi = PsiSpec::PowerLaw { alpha: 1.0 };
        let grid = TimeSortedGrid::build(&cfg, 2.0);
        for i in 0..cfg.len() {
            let brute = (0..cfg.len())
                .filter(|&j| j != i && below(&cfg, &psi, i, j))
                .map(|j| math::dist(cfg.x(i), cfg.x(j)))
                .fold(f64::INFINITY, f64::min);
            match nearest_cone_point(&cfg, &psi, &grid, i, true) {
                Some((_, d)) => assert_eq!(d, brute),
                None => assert!(brute.is_infinite()),
            }
        }
    }
}
