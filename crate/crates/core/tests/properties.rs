use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use psi_growth_core::extremality::{
    birth_growth_accept, xi_downward_cone, xi_downward_cone_brute, xi_envelope, EnvelopeParams,
};
use psi_growth_core::hull::{hull_vertices, BallSample};
use psi_growth_core::sampling::{sample_poisson_box, DensitySpec, Rho0};
use psi_growth_core::stats::{empirical_pairing, summarize, TestFunction};
use psi_growth_core::{
    compute_exponents, downward_cone_contains, rescale, upward_cone_contains, PointConfiguration, PsiSpec, Region,
    SpaceTimePoint,
};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(20_241_016), failure_persistence: None, ..Config::default() }
}

fn build(k: usize, pts: &[(Vec<f64>, f64)]) -> PointConfiguration {
    let pts: Vec<SpaceTimePoint> = pts.iter().map(|(x, h)| SpaceTimePoint::new(x.clone(), *h).unwrap()).collect();
    PointConfiguration::from_points(k + 1, &pts, Region::Unspecified).unwrap()
}

fn points(k: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
    prop::collection::vec((prop::collection::vec(0.0..1.0f64, k), 0.0..1.0f64), n)
}

fn alphas() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(0.8), Just(1.0)]
}

fn flags(cfg: &PointConfiguration, psi: &PsiSpec) -> Vec<bool> {
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha <= 1.0 => xi_downward_cone(cfg, psi).unwrap().flags,
        _ => {
            let r = xi_envelope(cfg, psi, &EnvelopeParams::default()).unwrap();
            assert!(r.unresolved.is_empty());
            r.flags
        }
    }
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn cone_duality(
        a in (prop::collection::vec(-2.0..2.0f64, 2), 0.0..3.0f64),
        b in (prop::collection::vec(-2.0..2.0f64, 2), 0.0..3.0f64),
        alpha in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
    ) {
        let psi = PsiSpec::PowerLaw { alpha };
        let p = SpaceTimePoint::new(a.0, a.1).unwrap();
        let q = SpaceTimePoint::new(b.0, b.1).unwrap();
        prop_assert_eq!(upward_cone_contains(&p, &q, &psi).unwrap(), downward_cone_contains(&q, &p, &psi).unwrap());
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn insertion_never_creates_extremal_points(
        base in points(1, 20..60),
        extra in points(1, 10..11),
        alpha in alphas(),
    ) {
        let psi = PsiSpec::PowerLaw { alpha };
        let mut cfg = build(1, &base);
        let mut before = flags(&cfg, &psi);
        for (x, h) in &extra {
            cfg.push(x, *h).unwrap();
            let after = flags(&cfg, &psi);
            for i in 0..before.len() {
                prop_assert!(before[i] || !after[i], "point {} became extremal", i);
            }
            before = after;
        }
    }

    #[test]
    fn insertion_never_creates_extremal_points_for_convex_profiles(
        base in points(1, 4..10),
        extra in points(1, 10..11),
    ) {
        // The default search radius grows with the data; a fixed one keeps the witness domain fixed.
        let psi = PsiSpec::PowerLaw { alpha: 2.0 };
        let params = EnvelopeParams { search_radius: Some(5.0), ..EnvelopeParams::default() };
        let envelope = |cfg: &PointConfiguration| {
            let r = xi_envelope(cfg, &psi, &params).unwrap();
            assert!(r.unresolved.is_empty());
            r.flags
        };
        let mut cfg = build(1, &base);
        let mut before = envelope(&cfg);
        for (x, h) in &extra {
            cfg.push(x, *h).unwrap();
            let after = envelope(&cfg);
            for i in 0..before.len() {
                prop_assert!(before[i] || !after[i], "point {} became extremal", i);
            }
            before = after;
        }
    }

    #[test]
    fn earliest_point_is_extremal(
        pts in points(2, 1..40),
        alpha in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
    ) {
        let cfg = build(2, &pts);
        let psi = PsiSpec::PowerLaw { alpha };
        let first = (0..cfg.len()).min_by(|&a, &b| cfg.h(a).total_cmp(&cfg.h(b))).unwrap();
        let unique = (0..cfg.len()).filter(|&j| cfg.h(j) == cfg.h(first)).count() == 1;
        prop_assume!(unique);
        prop_assert!(flags(&cfg, &psi)[first]);
    }

    #[test]
    fn discarded_seeds_never_block(pts in points(2, 1..80)) {
        let cfg = build(2, &pts);
        let psi = PsiSpec::PowerLaw { alpha: 1.0 };
        let accepted = birth_growth_accept(&cfg, &psi).unwrap().flags;
        let kept = cfg.filtered(|i| accepted[i]);
        let again = birth_growth_accept(&kept, &psi).unwrap().flags;
        prop_assert!(again.iter().all(|f| *f));
    }

    #[test]
    fn grid_cone_test_matches_brute_force(pts in points(2, 60..200), alpha in alphas()) {
        let cfg = build(2, &pts);
        let psi = PsiSpec::PowerLaw { alpha };
        prop_assert_eq!(xi_downward_cone(&cfg, &psi).unwrap().flags, xi_downward_cone_brute(&cfg, &psi).unwrap().flags);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn power_law_flags_are_self_similar(
        pts in points(1, 5..40),
        alpha in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
    ) {
        let cfg = build(1, &pts);
        let psi = PsiSpec::PowerLaw { alpha };
        let exps = compute_exponents(2, alpha, 0.0).unwrap();
        let base = flags(&cfg, &psi);
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = rescale(&cfg, &[0.5], lambda, &exps).unwrap();
            prop_assert_eq!(&flags(&scaled, &psi), &base, "lambda {}", lambda);
        }
    }

    #[test]
    fn flags_are_permutation_invariant(
        pts in points(2, 2..40),
        alpha in prop_oneof![Just(1.0), Just(2.0)],
        shift in 1usize..39,
    ) {
        let n = pts.len();
        let rotated: Vec<_> = (0..n).map(|i| pts[(i + shift) % n].clone()).collect();
        let psi = PsiSpec::PowerLaw { alpha };
        let a = flags(&build(2, &pts), &psi);
        let b = flags(&build(2, &rotated), &psi);
        for i in 0..n {
            prop_assert_eq!(a[(i + shift) % n], b[i]);
        }
    }

    #[test]
    fn hull_vertices_are_rotation_invariant(
        pts in prop::collection::vec((0.0..1.0f64, 0.0..std::f64::consts::TAU), 3..40),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        let to_xy = |r: f64, t: f64| vec![r * t.cos(), r * t.sin()];
        let a: Vec<Vec<f64>> = pts.iter().map(|&(r, t)| to_xy(r, t)).collect();
        let b: Vec<Vec<f64>> = pts.iter().map(|&(r, t)| to_xy(r, t + angle)).collect();
        let fa = hull_vertices(&BallSample::from_points(2, &a).unwrap()).unwrap();
        let fb = hull_vertices(&BallSample::from_points(2, &b).unwrap()).unwrap();
        prop_assert_eq!(fa.flags, fb.flags);
    }

    #[test]
    fn removing_interior_points_keeps_hull_vertices(
        pts in prop::collection::vec(prop::collection::vec(-0.57..0.57f64, 3), 5..40),
    ) {
        let s = BallSample::from_points(3, &pts).unwrap();
        let full = hull_vertices(&s).unwrap().flags;
        let kept: Vec<Vec<f64>> = pts.iter().zip(&full).filter(|(_, f)| **f).map(|(p, _)| p.clone()).collect();
        let reduced = hull_vertices(&BallSample::from_points(3, &kept).unwrap()).unwrap().flags;
        prop_assert!(reduced.iter().all(|f| *f));
    }
}

#[test]
fn campbell_formula_for_forced_flags() {
    // With every flag set the pairing is Σ f(x_i), whose mean is λ ∫ f ρ.
    let spec = DensitySpec::new_box(vec![0.0], vec![1.0], Rho0::Constant(1.0), 1.0, 0.5).unwrap();
    let f = TestFunction::CoordinateProduct(vec![2]);
    let lambda = 400.0;
    let values: Vec<f64> = (0..400)
        .map(|r| {
            let cfg = sample_poisson_box(&spec, lambda, r).unwrap();
            empirical_pairing(&cfg, &vec![true; cfg.len()], &f).unwrap()
        })
        .collect();
    let s = summarize(&values);
    // ∫ x² dx · ∫₀^{1/2} h dh = 1/3 · 1/8.
    let expect = lambda / 24.0;
    assert!((s.mean - expect).abs() < 3.0 * s.se_mean, "{} vs {expect} (se {})", s.mean, s.se_mean);
}
