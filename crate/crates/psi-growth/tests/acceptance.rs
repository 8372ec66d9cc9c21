//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::time::Instant;

use psi_growth::exec::Parallel;
use psi_growth_core::exec::{Executor, Sequential};
use psi_growth_core::extremality::{birth_growth_accept, xi_downward_cone, xi_envelope, EnvelopeParams};
use psi_growth_core::hull::{hull_vertices, support_epigraph_extremal, BallSample, SphereParams};
use psi_growth_core::rng::{derive_seed, stream, StreamRng};
use psi_growth_core::sampling::{default_time_cap, DensitySpec, Rho0};
use psi_growth_core::stats::{
    correlation, depoissonization_check, dominating_exponential, estimate_i, estimate_one_point_correlation,
    fit_exponential, fit_stretched_rate, kernel_correlation, limit_constants, localization_sample,
    normality_diagnostics, run_scaling_experiment, standardize, survival_curve, ConeAnalytic, EstimateReport,
    FitWindow, Functional, LimitSetup, MethodChoice, NormalityThresholds, QuadratureOptions, RunOptions, Sampling,
    ScalingExperiment, SpatialSetup, TestFunction, TimeCap,
};
use psi_growth_core::{
    compute_exponents, downward_cone_contains, rescale, upward_cone_contains, PointConfiguration, PsiSpec, Region,
    SpaceTimePoint,
};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Root of every seed below; fixed before any acceptance run.
const ROOT: u64 = 7_340_033;

fn seed(criterion: u64) -> u64 {
    derive_seed(ROOT, &[criterion], "acceptance")
}

fn rng(criterion: u64) -> StreamRng {
    stream(ROOT, &[criterion], "acceptance-draws")
}

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn power_grid(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|k| f64::from(1u32 << k)).collect()
}

fn bump(center: &[f64], radius: f64) -> TestFunction {
    TestFunction::Bump { center: center.to_vec(), radius, smoothness: 2.0 }
}

fn unit_box(d: usize, delta: f64) -> DensitySpec {
    DensitySpec::new_box(vec![0.0; d - 1], vec![1.0; d - 1], Rho0::Constant(1.0), delta, 1.0).unwrap()
}

/// All grid points enter the fits; a calibration seed showed flat normalized moments over the whole grid.
fn options() -> RunOptions {
    RunOptions { fit_window: FitWindow::All, ..RunOptions::default() }
}

fn maximal_points(
    d: usize,
    delta: f64,
    grid: Vec<f64>,
    replicates: usize,
    functions: Vec<TestFunction>,
    seed: u64,
    exec: &Parallel,
) -> EstimateReport {
    let exp = ScalingExperiment {
        density: unit_box(d, delta),
        functional: Functional::Extremality {
            psi: PsiSpec::PowerLaw { alpha: 1.0 },
            method: MethodChoice::DownwardCone,
            envelope: EnvelopeParams::default(),
        },
        lambda_grid: grid,
        replicates,
        functions,
        seed,
        time_cap: TimeCap::Auto,
        sampling: Sampling::Poisson,
        options: options(),
    };
    run_scaling_experiment(&exp, exec).unwrap()
}

fn slopes(report: &EstimateReport, f: usize) -> (f64, f64, f64, f64) {
    let m = report.mean_fits[f].as_ref().expect("positive means");
    let v = report.var_fits[f].as_ref().expect("positive variances");
    (m.slope, m.se_slope, v.slope, v.se_slope)
}

fn criterion_1(exec: &Parallel) -> Verdict {
    let f = bump(&[0.5], 0.25);
    let report =
        maximal_points(2, 0.0, power_grid(8, 14), 200, vec![f.clone(), TestFunction::Constant(1.0)], seed(1), exec);
    let mut pass = true;
    let mut detail = String::new();
    for (i, name) in ["bump", "f=1"].iter().enumerate() {
        let (ms, mse, vs, vse) = slopes(&report, i);
        let ok = within(ms, 0.5, 0.05) && within(vs, 0.5, 0.10);
        pass &= ok;
        detail += &format!("{name}: mean slope {ms:.3}±{mse:.3}, var slope {vs:.3}±{vse:.3}; ");
    }
    // Normalized mean at the largest intensity against the limit integral.
    let tau = compute_exponents(2, 1.0, 0.0).unwrap().tau;
    let top = report.largest();
    let scale = top.lambda.powf(tau);
    let (normalized, se) = (top.summaries[0].mean / scale, top.summaries[0].se_mean / scale);
    let constants =
        limit_constants(&ConeAnalytic::new(2, 1.0, 0.0).unwrap(), &QuadratureOptions::default(), exec).unwrap();
    let space = SpatialSetup::new(vec![0.0], vec![1.0], Rho0::Constant(1.0), tau);
    let predicted = estimate_i(&f, &space, &constants);
    let consistent = (normalized - predicted.value).abs() <= 2.0 * se + predicted.error;
    pass &= consistent;
    detail += &format!(
        "mean/lambda^tau {normalized:.4}±{se:.4} vs I(f) {:.4}±{:.1e} ({})",
        predicted.value,
        predicted.error,
        if consistent { "consistent" } else { "inconsistent" }
    );
    Verdict::new(pass, detail)
}

fn criterion_2(exec: &Parallel) -> Verdict {
    let three = maximal_points(3, 0.0, power_grid(8, 14), 200, vec![bump(&[0.5, 0.5], 0.25)], seed(2), exec);
    let weighted = maximal_points(2, 1.0, power_grid(8, 14), 200, vec![bump(&[0.5], 0.25)], seed(20), exec);
    let (a, ase, _, _) = slopes(&three, 0);
    let (b, bse, _, _) = slopes(&weighted, 0);
    let ta = compute_exponents(3, 1.0, 0.0).unwrap().tau;
    let tb = compute_exponents(2, 1.0, 1.0).unwrap().tau;
    Verdict::new(
        within(a, ta, 0.05) && within(b, tb, 0.05),
        format!(
            "d=3: mean slope {a:.3}±{ase:.3} (target {ta:.4}); delta=1: mean slope {b:.3}±{bse:.3} (target {tb:.4})"
        ),
    )
}

fn criterion_3(exec: &Parallel) -> Verdict {
    let exp = ScalingExperiment {
        density: DensitySpec::new_ball(2, Rho0::Constant(1.0), 0.0).unwrap(),
        functional: Functional::HullVertices,
        lambda_grid: power_grid(9, 15),
        replicates: 200,
        functions: vec![TestFunction::Constant(1.0)],
        seed: seed(3),
        time_cap: TimeCap::Spec,
        sampling: Sampling::Poisson,
        options: options(),
    };
    let report = run_scaling_experiment(&exp, exec).unwrap();
    let (ms, mse, vs, vse) = slopes(&report, 0);
    Verdict::new(
        within(ms, 1.0 / 3.0, 0.05) && within(vs, 1.0 / 3.0, 0.10),
        format!("vertex count mean slope {ms:.3}±{mse:.3}, var slope {vs:.3}±{vse:.3}"),
    )
}

fn disk_points(rng: &mut StreamRng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * std::f64::consts::TAU;
            vec![r * t.cos(), r * t.sin()]
        })
        .collect()
}

fn criterion_4(_: &Parallel) -> Verdict {
    let mut rng = rng(4);
    let (mut points, mut unresolved, mut disagree) = (0usize, 0usize, 0usize);
    for _ in 0..500 {
        let n = rng.random_range(3..=30);
        let sample = BallSample::from_points(2, &disk_points(&mut rng, n)).unwrap();
        let hull = hull_vertices(&sample).unwrap().flags;
        let dual = support_epigraph_extremal(&sample, &SphereParams::default()).unwrap();
        points += n;
        unresolved += dual.unresolved.len();
        disagree += (0..n).filter(|i| !dual.unresolved.contains(i) && hull[*i] != dual.flags[*i]).count();
    }
    let fraction = unresolved as f64 / points as f64;
    Verdict::new(
        disagree == 0 && fraction < 1e-3,
        format!("500 samples, {points} points: {disagree} disagreements, unresolved fraction {fraction:.2e}"),
    )
}

fn uniform_config(rng: &mut StreamRng, d: usize, n: usize) -> PointConfiguration {
    let pts: Vec<SpaceTimePoint> = (0..n)
        .map(|_| SpaceTimePoint::new((0..d - 1).map(|_| rng.random::<f64>()).collect(), rng.random::<f64>()).unwrap())
        .collect();
    PointConfiguration::from_points(d, &pts, Region::Unspecified).unwrap()
}

fn criterion_5(_: &Parallel) -> Verdict {
    let mut rng = rng(5);
    let (mut unresolved, mut disagree, mut points) = (0usize, 0usize, 0usize);
    for i in 0..1000 {
        let alpha = [0.5, 1.0][i % 2];
        let d = [2, 3][(i / 2) % 2];
        let cfg = uniform_config(&mut rng, d, 50);
        let psi = PsiSpec::PowerLaw { alpha };
        let cone = xi_downward_cone(&cfg, &psi).unwrap().flags;
        let env = xi_envelope(&cfg, &psi, &EnvelopeParams::default()).unwrap();
        points += cfg.len();
        unresolved += env.unresolved.len();
        disagree += (0..cfg.len()).filter(|j| !env.unresolved.contains(j) && env.flags[*j] != cone[*j]).count();
    }
    Verdict::new(
        disagree == 0,
        format!("1000 configurations, {points} points: {disagree} disagreements on resolved points, {unresolved} unresolved"),
    )
}

/// One run at the largest intensity of criterion 1 with 500 replicates, shared by criteria 6 and 7.
struct LargeRun {
    report: EstimateReport,
    functions: Vec<TestFunction>,
}

fn large_run(exec: &Parallel) -> LargeRun {
    let functions =
        vec![bump(&[0.5], 0.25), bump(&[0.3], 0.15), bump(&[0.6], 0.15), bump(&[0.85], 0.1), bump(&[0.4], 0.15)];
    let report = maximal_points(2, 0.0, vec![16384.0], 500, functions.clone(), seed(6), exec);
    LargeRun { report, functions }
}

fn criterion_6(run: &LargeRun) -> Verdict {
    let thresholds = NormalityThresholds::default();
    let z = run.report.largest().standardized(0);
    let n = normality_diagnostics(&z, &thresholds);
    let mut rng = rng(6);
    let normal: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
    let exponential: Vec<f64> = (0..500).map(|_| Exp1.sample(&mut rng)).collect();
    let control_normal = normality_diagnostics(&standardize(&normal), &thresholds);
    let control_exp = normality_diagnostics(&standardize(&exponential), &thresholds);
    Verdict::new(
        n.pass && control_normal.pass && !control_exp.pass,
        format!(
            "skew {:.3}, excess kurtosis {:.3}, KS {:.4} (threshold {:.4}); controls: normal {}, exponential {}",
            n.skewness,
            n.excess_kurtosis,
            n.ks,
            n.ks_threshold,
            if control_normal.pass { "passes" } else { "fails" },
            if control_exp.pass { "passes" } else { "fails" },
        ),
    )
}

fn criterion_7(run: &LargeRun) -> Verdict {
    let space =
        SpatialSetup::new(vec![0.0], vec![1.0], Rho0::Constant(1.0), compute_exponents(2, 1.0, 0.0).unwrap().tau);
    let samples = &run.report.largest().samples;
    let (f, g, far, overlap) = (1, 2, 3, 4);
    let mut pass = true;
    let mut detail = String::new();
    for (label, other) in [("adjacent disjoint", g), ("overlapping", overlap)] {
        let predicted = kernel_correlation(&run.functions[f], &run.functions[other], &space);
        let c = correlation(&samples[f], &samples[other], 1.96);
        let ok = c.ci_low <= predicted.value + predicted.error && predicted.value - predicted.error <= c.ci_high;
        pass &= ok;
        detail += &format!(
            "{label}: corr {:.3} CI [{:.3}, {:.3}] vs kernel {:.3}; ",
            c.r, c.ci_low, c.ci_high, predicted.value
        );
    }
    let predicted = kernel_correlation(&run.functions[f], &run.functions[far], &space);
    let c = correlation(&samples[f], &samples[far], 1.96);
    let ok = (c.r - predicted.value).abs() <= 2.0 * c.se;
    pass &= ok;
    detail += &format!("far separated: corr {:.3}±{:.3} vs kernel {:.3}", c.r, c.se, predicted.value);
    Verdict::new(pass, detail)
}

fn criterion_8(exec: &Parallel) -> Verdict {
    let report = depoissonization_check(
        &unit_box(2, 0.0),
        &PsiSpec::PowerLaw { alpha: 1.0 },
        &[1 << 10, 1 << 12, 1 << 14],
        300,
        &bump(&[0.5], 0.25),
        seed(8),
        exec,
    )
    .unwrap();
    let last = report.rows.last().unwrap();
    let deviations: Vec<String> =
        report.rows.iter().map(|r| format!("{:.2e}±{:.1e}", (r.mean_ratio - 1.0).abs(), r.se_mean_ratio)).collect();
    Verdict::new(
        report.mean_deviation_decreasing && (last.mean_ratio - 1.0).abs() < 0.02 && (last.var_ratio - 1.0).abs() < 0.10,
        format!(
            "|mean ratio - 1| over n: [{}] ({}); variance ratio at n=2^14 {:.3}±{:.3}",
            deviations.join(", "),
            if report.mean_deviation_decreasing { "decreasing" } else { "not decreasing" },
            last.var_ratio,
            last.se_var_ratio
        ),
    )
}

fn criterion_9(exec: &Parallel) -> Verdict {
    // (a) Localization radii of interior points.
    let lambda = 4096.0;
    let mut density = unit_box(2, 0.0);
    density.time_cap = default_time_cap(2, 1.0, 0.0, lambda, 1.0, 1.0, 1.0);
    let psi = PsiSpec::PowerLaw { alpha: 1.0 };
    let mut r_grid: Vec<f64> = (0..40).map(|k| 1e-3 * 1.2f64.powi(k)).collect();
    r_grid.push(1.5);
    let sample =
        localization_sample(&density, &psi, lambda, &r_grid, 0.1, 50, seed(9), &EnvelopeParams::default(), exec)
            .unwrap();
    let grid: Vec<f64> = r_grid.iter().map(|r| r * sample.scale).collect();
    let survival = survival_curve(&sample.radii, &grid);
    let positive: Vec<usize> = (0..grid.len()).filter(|&k| survival[k] > 0.0).collect();
    let split = positive.len() / 2;
    let (small, large) = positive.split_at(split);
    let pick = |idx: &[usize], v: &[f64]| idx.iter().map(|&k| v[k]).collect::<Vec<f64>>();
    let overall = fit_exponential(&pick(&positive, &grid), &pick(&positive, &survival)).unwrap();
    // One-constant family C · exp(−L/C); a free two-parameter fit on a log-convex stretch is exceeded outside it.
    let envelope = dominating_exponential(&pick(small, &grid), &pick(small, &survival)).unwrap();
    let count = sample.radii.len() as f64;
    let above = large
        .iter()
        .filter(|&&k| {
            let e = envelope.eval(grid[k]).min(1.0);
            survival[k] > e + 2.0 * (e * (1.0 - e) / count).sqrt()
        })
        .count();
    let tail_a = overall.slope < 0.0 && above == 0;
    let mut detail = format!(
        "(a) {} radii, log-slope {:.3}, envelope {:.3}*exp(-L/{:.3}), {} of {} large-L points above it; ",
        sample.radii.len(),
        overall.slope,
        envelope.intercept.exp(),
        -1.0 / envelope.slope,
        above,
        large.len()
    );

    // (b) One-point correlation of the limit process with common random numbers across heights.
    let mut tail_b = true;
    for (alpha, time_cap, window, top, replicates) in [(1.0, 3.0, 4.0, 2.4, 4000), (2.0, 5.0, 3.0, 3.0, 2000)] {
        let setup = LimitSetup::new(2, alpha, 0.0, window, time_cap).unwrap();
        let heights: Vec<f64> = (1..=12).map(|k| top * k as f64 / 12.0).collect();
        let mut m = Vec::new();
        let mut se = Vec::new();
        let mut warnings = 0;
        for &h in &heights {
            let e = estimate_one_point_correlation(&setup, h, replicates, seed(90 + alpha as u64), exec).unwrap();
            warnings += e.warnings.len() + e.unresolved;
            m.push(e.value);
            se.push(e.se);
        }
        let monotone = m.windows(2).all(|w| w[1] <= w[0]);
        let power = (alpha + 1.0) / alpha;
        let half = heights.len() / 2;
        let rate = fit_stretched_rate(&heights[..half], &m[..half], power).unwrap();
        let above = (half..heights.len())
            .filter(|&k| m[k] > (-rate * heights[k].powf(power)).exp() + 2.0 * se[k].max(1.0 / replicates as f64))
            .count();
        let ok = monotone && above == 0 && warnings == 0;
        tail_b &= ok;
        detail += &format!(
            "(b) alpha={alpha}: {}, rate {rate:.3} on h^{power:.2}, {above} upper points above envelope, {warnings} warnings; ",
            if monotone { "nonincreasing" } else { "not monotone" }
        );
    }
    Verdict::new(tail_a && tail_b, detail.trim_end_matches("; ").to_string())
}

fn flags(cfg: &PointConfiguration, psi: &PsiSpec, params: &EnvelopeParams) -> Vec<bool> {
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha <= 1.0 => xi_downward_cone(cfg, psi).unwrap().flags,
        _ => {
            let r = xi_envelope(cfg, psi, params).unwrap();
            assert!(r.unresolved.is_empty(), "unresolved envelope points");
            r.flags
        }
    }
}

fn criterion_10(exec: &Parallel) -> Verdict {
    let mut rng = rng(10);
    let mut failures = Vec::new();
    let default = EnvelopeParams::default();

    let mut bad = 0;
    for i in 0..500 {
        let psi = PsiSpec::PowerLaw { alpha: [0.5, 0.8, 1.0][i % 3] };
        let n = rng.random_range(20..60);
        let mut cfg = uniform_config(&mut rng, 2, n);
        let mut before = flags(&cfg, &psi, &default);
        for _ in 0..10 {
            cfg.push(&[rng.random::<f64>()], rng.random::<f64>()).unwrap();
            let after = flags(&cfg, &psi, &default);
            bad += (0..before.len()).filter(|&j| !before[j] && after[j]).count();
            before = after;
        }
    }
    let fixed = EnvelopeParams { search_radius: Some(5.0), ..EnvelopeParams::default() };
    let convex = PsiSpec::PowerLaw { alpha: 2.0 };
    for _ in 0..100 {
        let n = rng.random_range(4..10);
        let mut cfg = uniform_config(&mut rng, 2, n);
        let mut before = flags(&cfg, &convex, &fixed);
        for _ in 0..10 {
            cfg.push(&[rng.random::<f64>()], rng.random::<f64>()).unwrap();
            let after = flags(&cfg, &convex, &fixed);
            bad += (0..before.len()).filter(|&j| !before[j] && after[j]).count();
            before = after;
        }
    }
    if bad > 0 {
        failures.push(format!("insertion created {bad} extremal points"));
    }

    let mut bad = 0;
    for i in 0..500 {
        let psi = PsiSpec::PowerLaw { alpha: [0.5, 1.0, 2.0][i % 3] };
        let n = rng.random_range(1..40);
        let cfg = uniform_config(&mut rng, 3, n);
        let first = (0..n).min_by(|&a, &b| cfg.h(a).total_cmp(&cfg.h(b))).unwrap();
        if !flags(&cfg, &psi, &default)[first] {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("{bad} earliest points not extremal"));
    }

    let mut bad = 0;
    for i in 0..10_000 {
        let psi = PsiSpec::PowerLaw { alpha: [0.5, 1.0, 2.0][i % 3] };
        let mut point = || {
            SpaceTimePoint::new(
                vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
                rng.random_range(0.0..3.0),
            )
            .unwrap()
        };
        let (p, q) = (point(), point());
        if upward_cone_contains(&p, &q, &psi).unwrap() != downward_cone_contains(&q, &p, &psi).unwrap() {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("{bad} duality violations"));
    }

    let mut bad = 0;
    for i in 0..100 {
        let alpha = [0.5, 1.0, 2.0][i % 3];
        let psi = PsiSpec::PowerLaw { alpha };
        let exps = compute_exponents(2, alpha, 0.0).unwrap();
        let n = rng.random_range(5..40);
        let cfg = uniform_config(&mut rng, 2, n);
        let base = flags(&cfg, &psi, &default);
        for lambda in [0.5, 2.0, 10.0] {
            if flags(&rescale(&cfg, &[0.5], lambda, &exps).unwrap(), &psi, &default) != base {
                bad += 1;
            }
        }
    }
    if bad > 0 {
        failures.push(format!("{bad} rescaled configurations changed flags"));
    }

    let mut bad = 0;
    let linear = PsiSpec::PowerLaw { alpha: 1.0 };
    for _ in 0..500 {
        let n = rng.random_range(1..80);
        let cfg = uniform_config(&mut rng, 3, n);
        let accepted = birth_growth_accept(&cfg, &linear).unwrap().flags;
        let kept = cfg.filtered(|j| accepted[j]);
        if !birth_growth_accept(&kept, &linear).unwrap().flags.iter().all(|f| *f) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("{bad} configurations where discarded seeds block"));
    }

    // Reports must not depend on the executor or on repetition.
    let experiment = |functional: Functional, density: DensitySpec| ScalingExperiment {
        density,
        functional,
        lambda_grid: vec![64.0, 128.0, 256.0],
        replicates: 30,
        functions: vec![TestFunction::Constant(1.0), bump(&[0.5], 0.3)],
        seed: seed(10),
        time_cap: TimeCap::Spec,
        sampling: Sampling::Poisson,
        options: options(),
    };
    let box_density = DensitySpec::new_box(vec![0.0], vec![1.0], Rho0::Constant(1.0), 0.0, 0.5).unwrap();
    let runs = [
        experiment(
            Functional::Extremality { psi: linear.clone(), method: MethodChoice::Auto, envelope: default },
            box_density.clone(),
        ),
        experiment(
            Functional::Extremality { psi: convex.clone(), method: MethodChoice::Envelope, envelope: default },
            box_density,
        ),
    ];
    let four = Parallel::new(Some(4)).unwrap();
    let mut nondeterministic = 0;
    for exp in &runs {
        let json = |e: &dyn Fn() -> EstimateReport| serde_json::to_string(&e()).unwrap();
        let reference = json(&|| run_scaling_experiment(exp, &Sequential).unwrap());
        for other in [
            json(&|| run_scaling_experiment(exp, &Sequential).unwrap()),
            json(&|| run_scaling_experiment(exp, exec).unwrap()),
            json(&|| run_scaling_experiment(exp, &four).unwrap()),
        ] {
            if other != reference {
                nondeterministic += 1;
            }
        }
    }
    if nondeterministic > 0 {
        failures.push(format!("{nondeterministic} reports differ across executors"));
    }

    Verdict::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "insertion 500x10 (+100x10 convex), earliest point 500, duality 10^4, self-similarity 100x3, \
                 discarded seeds 500, determinism across {} and 4 workers",
                exec.workers()
            )
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let exec = Parallel::new(None).expect("worker pool");
    let mut failed = Vec::new();
    let mut report = |id: &str, title: &str, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = run();
        println!(
            "{} criterion {id:>2} {title}: {} [{:.1}s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
        if !v.pass {
            failed.push(id.to_string());
        }
    };
    report("1", "maximal-point scaling d=2", &mut || criterion_1(&exec));
    report("2", "second exponent points", &mut || criterion_2(&exec));
    report("3", "convex hull vertex scaling", &mut || criterion_3(&exec));
    report("4", "hull vs support-epigraph dual", &mut || criterion_4(&exec));
    report("5", "envelope vs downward cone", &mut || criterion_5(&exec));
    let large = large_run(&exec);
    report("6", "central limit", &mut || criterion_6(&large));
    report("7", "covariance kernel", &mut || criterion_7(&large));
    report("8", "de-Poissonization", &mut || criterion_8(&exec));
    report("9", "tail properties", &mut || criterion_9(&exec));
    report("10", "property suites and determinism", &mut || criterion_10(&exec));
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        std::process::exit(1);
    }
}
