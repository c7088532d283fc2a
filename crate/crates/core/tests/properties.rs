mod common;

use common::{ball_problem, simplex_problem};
use fwkit::analysis::{fit_rate, min_prefix, rate_contour, ContourFamily};
use fwkit::base::{scaling, seeded_rng, FeasibleRegion, Point, StepKind};
use fwkit::harness::{run_batch, verify_manifest, ExperimentConfig};
use fwkit::herding::{herding_run_observed, kernel, Density};
use fwkit::objectives::Location;
use fwkit::regions::{LpBall, ProbabilitySimplex};
use fwkit::solvers::{afw_run, afw_run_observed, difw_run_observed, fw_run, fw_run_observed};
use fwkit::StepRule;
use proptest::prelude::*;
use rand::Rng;

fn location() -> impl Strategy<Value = Location> {
    prop_oneof![
        Just(Location::Interior),
        Just(Location::Boundary),
        Just(Location::Exterior),
    ]
}

fn rule() -> impl Strategy<Value = StepRule> {
    prop_oneof![
        (1u32..=8).prop_map(|ell| StepRule::OpenLoop { ell }),
        Just(StepRule::LineSearch),
        Just(StepRule::ShortStep),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lmo_beats_every_sampled_point(p in prop_oneof![Just(1.0), 1.1f64..8.0], r in 0.1f64..3.0, d in 1usize..15, seed: u64) {
        let ball = LpBall::new(p, r, d).unwrap();
        let simplex = ProbabilitySimplex::new(d);
        let mut rng = seeded_rng(seed);
        for region in [&ball as &dyn FeasibleRegion, &simplex] {
            let c = Point::from_fn(d, |_, _| rng.gen_range(-5.0..5.0));
            let v = region.lmo(&c);
            prop_assert!(region.contains(&v, 1e-10));
            for _ in 0..20 {
                let x = region.sample(&mut rng);
                prop_assert!(region.contains(&x, 1e-10));
                prop_assert!(c.dot(&v) <= c.dot(&x) + 1e-10);
                prop_assert!((&x - &v).norm() <= region.diameter() + 1e-10);
            }
        }
    }

    #[test]
    fn uniform_scaling_on_balls(p in 2.0f64..6.0, d in 2usize..10, seed: u64, loc in location()) {
        let problem = ball_problem(p, loc, d, seed);
        let uc = problem.region.uniform_convexity().unwrap();
        let mut rng = seeded_rng(seed ^ 1);
        for _ in 0..10 {
            let x = problem.region.sample(&mut rng);
            let g = problem.objective.gradient(&x);
            let v = problem.region.lmo(&g);
            let h = problem.raw_gap(&x);
            prop_assert!(scaling::uniform(&g, &x, &v, h, uc).holds(1e-8));
        }
    }

    #[test]
    fn interior_scaling_on_the_simplex(d in 2usize..20, seed: u64) {
        let problem = simplex_problem(Location::Interior, d);
        let beta = problem.region.inner_radius(&problem.reference.xstar);
        prop_assert!(beta > 0.0);
        let mut rng = seeded_rng(seed);
        for _ in 0..10 {
            let x = problem.region.sample(&mut rng);
            let g = problem.objective.gradient(&x);
            let v = problem.region.lmo(&g);
            let flat = g.add_scalar(-g.mean());
            let ineq = scaling::interior(&flat, &x, &v, beta, problem.diameter());
            prop_assert!(ineq.holds(1e-8), "{:?}", ineq);
        }
    }

    #[test]
    fn gradients_match_central_differences(d in 2usize..12, seed: u64, loc in location()) {
        let problem = simplex_problem(loc, d);
        let f = problem.objective.as_ref();
        let mut rng = seeded_rng(seed);
        let x = problem.region.sample(&mut rng);
        let g = f.gradient(&x);
        for i in 0..d {
            let mut e = Point::zeros(d);
            e[i] = 1e-6;
            let fd = (f.value(&(&x + &e)) - f.value(&(&x - &e))) / 2e-6;
            prop_assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0));
        }
    }

    #[test]
    fn fw_traces_are_feasible_and_gap_dominated(loc in location(), rule in rule(), d in 2usize..30) {
        let problem = simplex_problem(loc, d);
        let trace = fw_run(&problem, rule, &problem.region.default_start(), 200).unwrap();
        prop_assert_eq!(trace.len(), 201);
        for r in &trace.records {
            prop_assert!(r.h >= 0.0);
            prop_assert!(r.fw_gap >= r.h - 1e-10);
        }
        if rule == StepRule::LineSearch {
            prop_assert!(trace.records.windows(2).all(|w| w[1].h <= w[0].h + 1e-12));
        }
        let bound = |t: usize, scale: f64, shift: f64| {
            scale * problem.smoothness() * problem.diameter().powi(2) / (t as f64 + shift) + 1e-9
        };
        match rule {
            StepRule::OpenLoop { ell: 4 } => {
                prop_assert!(trace.records.iter().all(|r| r.h <= bound(r.t, 8.0, 3.0)));
            }
            StepRule::OpenLoop { ell: 2 } => {
                prop_assert!(trace.records.iter().all(|r| r.h <= bound(r.t, 8.0, 2.0)));
            }
            _ => {}
        }
    }

    #[test]
    fn short_step_makes_the_promised_progress(p in 1.5f64..4.0, d in 2usize..10, seed: u64) {
        let problem = ball_problem(p, Location::Exterior, d, seed);
        let l = problem.smoothness();
        let mut prev: Option<(f64, f64)> = None;
        let mut ok = true;
        fw_run_observed(&problem, StepRule::ShortStep, &problem.region.default_start(), 100, |v| {
            if let Some((value, promised)) = prev {
                ok &= value - v.value >= promised - 1e-10;
            }
            let d = v.vertex - v.x;
            let n2 = d.norm_squared();
            let gap = -v.gradient.dot(&d);
            prev = (n2 > 0.0).then(|| (v.value, gap * gap.min(l * n2) / (2.0 * l * n2)));
        })
        .unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn away_steps_keep_their_promises(loc in location(), rule in prop_oneof![Just(StepRule::LineSearch), (1u32..=8).prop_map(|ell| StepRule::OpenLoop { ell })], d in 3usize..25) {
        let problem = simplex_problem(loc, d);
        let mut sign_ok = true;
        let trace = afw_run_observed(&problem, rule, &problem.region.default_start(), 300, |v| {
            sign_ok &= scaling::away_sign(v.gradient, v.away_vertex, v.fw_vertex).holds(1e-12);
        })
        .unwrap();
        prop_assert!(sign_ok);
        let mut drops = 0;
        for (i, w) in trace.records.windows(2).enumerate() {
            if w[0].kind == StepKind::NonProgress {
                prop_assert!(w[1].h <= w[0].h + 1e-12, "non-progress step {} raised h", i);
            }
            drops += usize::from(w[0].kind == StepKind::Drop);
            prop_assert!(drops <= i + 1 - drops);
        }
    }

    #[test]
    fn pairwise_gap_is_nonnegative(loc in location(), ell in prop_oneof![Just(2u32), Just(4), Just(8)], d in 2usize..25) {
        let problem = simplex_problem(loc, d);
        let mut worst = f64::INFINITY;
        difw_run_observed(&problem, StepRule::OpenLoop { ell }, &problem.region.default_start(), 300, |v| {
            worst = worst.min(v.gradient.dot(&(v.minus - v.plus)));
        })
        .unwrap();
        prop_assert!(worst >= -1e-12);
    }

    #[test]
    fn wolfe_vertices_stay_in_the_optimal_face(half in 2usize..20, rho in 0.0f64..1.0, rule in rule()) {
        let d = 2 * half;
        let rho = 2.0 / d as f64 + rho;
        let problem = simplex_problem(Location::Face(rho), d);
        let mut inside = true;
        fw_run_observed(&problem, rule, &problem.region.default_start(), 100, |v| {
            inside &= v.vertex.iter().take(half).all(|&c| c == 0.0);
        })
        .unwrap();
        prop_assert!(inside);
    }

    #[test]
    fn min_prefix_is_idempotent_and_nonincreasing(h in prop::collection::vec(0.0f64..1e3, 0..200)) {
        let m = min_prefix(&h);
        prop_assert!(m.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(min_prefix(&m), m);
    }

    #[test]
    fn power_laws_have_their_exponent(c in 0.1f64..10.0, k in 0.5f64..3.0) {
        let series: Vec<(usize, f64)> = (1..=300).map(|t| (t, c / (t as f64).powf(k))).collect();
        let fit = fit_rate(&series, 1, 300).unwrap();
        prop_assert!((fit.slope - k).abs() < 1e-9);
    }

    #[test]
    fn configs_round_trip(name in "[a-z][a-z0-9_]{0,10}", iters in 1usize..100_000, seed in 0..=i64::MAX as u64) {
        let mut cfg = ExperimentConfig::from_toml(&format!(
            "name = \"{name}\"\nalgorithm = \"fw\"\nrules = [\"openloop:4\", \"linesearch\"]\niterations = {iters}\nseed = {seed}\noutput = \"out\"\n\n[instance]\nlocation = \"interior\"\ndimension = 5\nseed = 0\nregion = {{ kind = \"simplex\", dimension = 5 }}\n"
        ))
        .unwrap();
        cfg.seed = seed;
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }
}

#[test]
fn kernel_identities_hold_on_many_pairs() {
    let mut rng = seeded_rng(11);
    for _ in 0..10_000 {
        let (y, z): (f64, f64) = (rng.gen(), rng.gen());
        let k = kernel(y, z);
        assert!((k - kernel(z, y)).abs() <= 1e-15);
        assert!((k - kernel((y - z).abs(), 0.0)).abs() <= 1e-15);
    }
}

#[test]
fn open_loop_one_herding_weights_are_uniform() {
    herding_run_observed(&Density::Uniform, StepRule::OpenLoop { ell: 1 }, 200, |v| {
        let w = 1.0 / v.t as f64;
        assert!(v.state.weights().iter().all(|&x| (x - w).abs() <= 1e-15 * w.max(1.0)));
        assert!((v.state.objective(&Density::Uniform) - v.value).abs() <= 1e-10);
    })
    .unwrap();
}

#[test]
fn away_step_line_search_is_monotone() {
    for loc in [Location::Interior, Location::Boundary, Location::Exterior] {
        let problem = simplex_problem(loc, 40);
        let trace = afw_run(&problem, StepRule::LineSearch, &problem.region.default_start(), 500).unwrap();
        assert!(trace.records.windows(2).all(|w| w[1].h <= w[0].h + 1e-12), "{loc}");
    }
}

#[test]
fn rate_contours_are_deterministic() {
    let a = rate_contour(ContourFamily::Face, &[10, 20], 300, 50, 1.8);
    let b = rate_contour(ContourFamily::Face, &[10, 20], 300, 50, 1.8);
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn batches_are_byte_identical_across_runs() {
    let mut configs = fwkit::harness::figure_preset("wolfe", false).unwrap();
    configs.extend(fwkit::harness::figure_preset("herding", false).unwrap());
    for cfg in &mut configs {
        cfg.iterations = 200;
    }
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_batch(&configs, a.path(), 4).unwrap();
    run_batch(&configs, b.path(), 1).unwrap();
    let manifest = |dir: &std::path::Path| std::fs::read_to_string(dir.join("manifest.csv")).unwrap();
    assert_eq!(manifest(a.path()), manifest(b.path()));
    assert!(verify_manifest(a.path()).unwrap().is_empty());

    let victim = std::fs::read_dir(a.path().join(&configs[0].output))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut bytes = std::fs::read(&victim).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 1;
    std::fs::write(&victim, bytes).unwrap();
    assert_eq!(verify_manifest(a.path()).unwrap().len(), 1);
}
