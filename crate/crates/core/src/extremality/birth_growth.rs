use alloc::vec;
use alloc::vec::Vec;

use super::{require_space_time, ExtremalityResult, Method};
use crate::error::{Error, Result};
use crate::geometry::{lex_cmp, PointConfiguration, PsiSpec};
use crate::index::GridGeometry;
use crate::math;

/// Classical birth–growth acceptance with linear growth.
///
/// Points are processed by increasing time (ties by lexicographic position). A point
/// born at `(x, t)` is accepted iff every previously accepted seed `(y, s)` has
/// `|x − y| > t − s`, i.e. `x` lies outside the cell grown from `y` so far.
pub fn birth_growth_accept(config: &PointConfiguration, psi: &PsiSpec) -> Result<ExtremalityResult> {
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha == 1.0 => {}
        _ => return Err(Error::Method("birth-growth acceptance is defined for linear growth only".into())),
    }
    require_space_time(config)?;
    let n = config.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| config.h(a).total_cmp(&config.h(b)).then_with(|| lex_cmp(config.x(a), config.x(b))));
    let mut flags = vec![false; n];
    if n == 0 {
        return Ok(ExtremalityResult { flags, method: Method::BirthGrowth, unresolved: Vec::new() });
    }
    let (lo, hi) = config.bounding_box();
    let geometry = GridGeometry::covering(&lo, &hi, (n / 2).max(1));
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); geometry.total_cells()];
    let mut center = vec![0isize; geometry.k()];
    let first_time = config.h(order[0]);
    for &i in &order {
        let x = config.x(i);
        let t = config.h(i);
        // No accepted seed can reach further than the time elapsed since the first birth.
        let reach = t - first_time;
        geometry.coords(x, &mut center);
        let mut covered = false;
        for ring in 0..=geometry.max_ring(&center) {
            if (ring as f64 - 1.0).max(0.0) * geometry.cell > reach {
                break;
            }
            covered = geometry.for_each_in_ring(&center, ring, |cell| {
                if geometry.min_dist(x, cell) > reach {
                    return false;
                }
                buckets[geometry.linear(cell)].iter().any(|&j| math::dist(x, config.x(j)) <= t - config.h(j))
            });
            if covered {
                break;
            }
        }
        if !covered {
            flags[i] = true;
            buckets[geometry.linear(&center)].push(i);
        }
    }
    Ok(ExtremalityResult { flags, method: Method::BirthGrowth, unresolved: Vec::new() })
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

    fn brute(config: &PointConfiguration) -> Vec<bool> {
        let n = config.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| config.h(a).total_cmp(&config.h(b)).then_with(|| lex_cmp(config.x(a), config.x(b))));
        let mut accepted: Vec<usize> = Vec::new();
        let mut flags = vec![false; n];
        for i in order {
            if accepted.iter().all(|&j| math::dist(config.x(i), config.x(j)) > config.h(i) - config.h(j)) {
                flags[i] = true;
                accepted.push(i);
            }
        }
        flags
    }

    #[test]
    fn hand_example() {
        let r = birth_growth_accept(&cfg2(&[(0.0, 0.0), (0.5, 0.3), (0.1, 0.5)]), &PsiSpec::PowerLaw { alpha: 1.0 })
            .unwrap();
        assert_eq!(r.flags, vec![true, true, false]);
    }

    #[test]
    fn rejects_nonlinear_growth() {
        assert!(matches!(
            birth_growth_accept(&cfg2(&[(0.0, 0.0)]), &PsiSpec::PowerLaw { alpha: 2.0 }),
            Err(Error::Method(_))
        ));
    }

    #[test]
    fn grid_matches_sequential_scan() {
        for (d, seed) in [(2usize, 1u64), (3, 2)] {
            let k = d - 1;
            let spec = DensitySpec::new_box(vec![0.0; k], vec![1.0; k], Rho0::Constant(1.0), 0.0, 0.2).unwrap();
            let cfg = sample_poisson_box(&spec, 4000.0, seed).unwrap();
            let r = birth_growth_accept(&cfg, &PsiSpec::PowerLaw { alpha: 1.0 }).unwrap();
            assert_eq!(r.flags, brute(&cfg));
            let earliest = (0..cfg.len()).min_by(|&a, &b| cfg.h(a).total_cmp(&cfg.h(b))).unwrap();
            assert!(r.flags[earliest]);
        }
    }

    #[test]
    fn simultaneous_births_break_ties_by_position() {
        let r = birth_growth_accept(&cfg2(&[(0.2, 0.1), (0.1, 0.1), (0.15, 0.2)]), &PsiSpec::PowerLaw { alpha: 1.0 })
            .unwrap();
        assert_eq!(r.flags, vec![true, true, false]);
    }
}
