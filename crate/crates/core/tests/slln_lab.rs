mod common;

use proptest::prelude::*;
use randset::convex_sets::{hausdorff, ConvexCell, DualDirection, SetUnion, Vector};
use randset::mixing::{DriverFamily, Law, ScalarDriver};
use randset::randsets::{needle, SetProcessSpec};
use randset::slln_lab::*;

fn markov(seed: u64) -> ScalarDriver {
    ScalarDriver::new(
        DriverFamily::FiniteMarkov {
            p: vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            pi: vec![0.5, 0.5],
            emissions: vec![-1.0, 1.0],
        },
        seed,
    )
    .unwrap()
}

fn bounded(kind: u8) -> SetProcessSpec {
    match kind % 3 {
        0 => SetProcessSpec::Segment(ScalarDriver::new(
            DriverFamily::MDependent { m: 2, law: Law::Uniform { low: -1.0, high: 1.0 } },
            0,
        ).unwrap()),
        1 => SetProcessSpec::TwoPoint(markov(0)),
        _ => SetProcessSpec::RandomBall(ScalarDriver::new(
            DriverFamily::Alternating {
                even: Law::Uniform { low: 0.9, high: 1.1 },
                odd: Law::Normal { mean: 1.0, sd: 0.1 },
            },
            0,
        ).unwrap()),
    }
}

fn target_set(spec: &SetProcessSpec, target: Target) -> SetUnion {
    let mu = spec.driver().unwrap().mean();
    match (spec, target) {
        (SetProcessSpec::TwoPoint(_), Target::A) => SetUnion::points(&[Vector::d1(mu), Vector::d1(mu + 1.0)]).unwrap(),
        (SetProcessSpec::RandomBall(_), _) => SetUnion::single(ConvexCell::ball(Vector::d2(0.0, 0.0), mu).unwrap()),
        _ => SetUnion::single(ConvexCell::interval(mu, mu + 1.0).unwrap()),
    }
}

/// Independent sector of `cone{v_1..v_n}` from the raw signs.
fn sector(spec: &SetProcessSpec, seed: u64, n: usize) -> (f64, f64) {
    let signs = spec.scalar_draws(seed, n);
    let angles: Vec<f64> = signs.iter().enumerate().map(|(k, s)| s.signum() / (k + 1) as f64).collect();
    (angles.iter().cloned().fold(f64::MIN, f64::max), angles.iter().cloned().fold(f64::MAX, f64::min))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn running_average_matches_exact_expansion(kind in 0u8..3, seed in 0u64..10_000, coa in any::<bool>()) {
        let spec = bounded(kind);
        let target = if coa { Target::CoA } else { Target::A };
        let cps: Vec<usize> = (1..=10).collect();
        let traj = run_hausdorff_slln(&spec, target, 10, &cps, &[seed]).unwrap();
        let a = target_set(&spec, target);
        for n in 1..=10 {
            let exact = exact_cell_expansion(&spec, n, seed).unwrap();
            let h = hausdorff(&exact.sets, &a).unwrap();
            prop_assert!((traj[0].values[n - 1] - h).abs() <= 1e-9, "n={} {} vs {}", n, traj[0].values[n - 1], h);
        }
    }

    #[test]
    fn lattice_closed_forms_match_brute_force(m in -3.0f64..3.0, n in 1usize..40, lo in -3.0f64..3.0, w in 0.0f64..2.0) {
        let pts = two_point_lattice(m, n);
        let near = |x: f64| pts.iter().map(|p| (p - x).abs()).fold(f64::MAX, f64::min);
        let pair = pts.iter().map(|p| (p - lo).abs().min((p - lo - w).abs())).fold(0.0, f64::max)
            .max(near(lo)).max(near(lo + w));
        prop_assert!((lattice_to_pair(m, n, lo, lo + w) - pair).abs() <= 1e-12);
        let lattice: Vec<(f64, f64)> = pts.iter().map(|p| (*p, *p)).collect();
        let dense = common::dense_hausdorff_1d(&lattice, &[(lo, lo + w)], 1e-4);
        prop_assert!((lattice_to_interval(m, n, lo, lo + w) - dense).abs() <= 2e-4);
    }

    #[test]
    fn halo_sandwich_holds(seed in any::<u64>(), n in 1usize..=8) {
        let c = halo_certificate(&SetProcessSpec::NeedleHalo, n, seed).unwrap();
        prop_assert!(c.a_subset_sn && c.sn_in_halo);
        let r: f64 = (1..=n).map(|k| 1.0 / k as f64).sum::<f64>() / n as f64;
        prop_assert!((c.r_n - r).abs() <= 1e-15);
        prop_assert!(c.max_offset <= r * (1.0 + 1e-12));
        // Independent containment: every cell of the exact average stays in
        // the r_n-neighbourhood of the needle.
        let exact = exact_cell_expansion(&SetProcessSpec::NeedleHalo, n, seed).unwrap();
        let a = SetUnion::single(needle());
        for cell in exact.sets.cells() {
            if let Some(p) = cell.as_point() {
                prop_assert!(a.distance_to(&p).unwrap() <= r * (1.0 + 1e-12));
            } else {
                let v = cell.vertices().unwrap()[0];
                prop_assert!(a.distance_to(&v).unwrap() <= r * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn cone_certificates_persist(seed in any::<u64>()) {
        let spec = SetProcessSpec::random_ray_fair();
        let t = cone_tracking(&spec, 200, seed).unwrap();
        let (plus, minus) = sector(&spec, seed, 200);
        prop_assert_eq!((t.alpha_plus, t.alpha_minus), (plus, minus));
        let c = t.require_certificate().unwrap();
        prop_assert_eq!(c.n0, c.k_plus.max(c.k_minus));
        let w = Vector::d2(c.witness_x, c.witness_y);
        prop_assert!((c.witness_distance - c.witness_y.abs()).abs() <= 1e-15);
        prop_assert!(c.witness_distance > 0.0);
        for n in c.n0..=200 {
            let (p, m) = sector(&spec, seed, n);
            let ang = w.angle();
            prop_assert!(m <= ang && ang <= p, "n={}", n);
        }
    }
}

#[test]
fn convexification_reduction() {
    // Two-point averages and segment averages driven by the same sequence
    // share their support function, so their convex hulls coincide.
    let tp = SetProcessSpec::TwoPoint(markov(0));
    let seg = SetProcessSpec::Segment(markov(0));
    for seed in 0..20 {
        for n in 1..=10 {
            let a = exact_cell_expansion(&tp, n, seed).unwrap().sets;
            let b = exact_cell_expansion(&seg, n, seed).unwrap().sets;
            for u in [-1.0, 1.0] {
                let x = Vector::d1(u);
                assert!((a.support(&x) - b.support(&x)).abs() <= 1e-12);
            }
            let hull = SetUnion::single(a.convex_hull().unwrap());
            assert!(hausdorff(&hull, &b).unwrap() <= 1e-12);
            let co_a = SetUnion::single(ConvexCell::interval(0.0, 1.0).unwrap());
            let gap = hausdorff(&a, &co_a).unwrap() - hausdorff(&b, &co_a).unwrap();
            assert!((-1e-12..=0.5 / n as f64 + 1e-12).contains(&gap), "gap {gap}");
        }
    }
}

#[test]
fn segment_distance_is_the_mean_error() {
    let spec = bounded(0);
    let cps = geometric(10_000);
    let t = run_hausdorff_slln(&spec, Target::A, 10_000, &cps, &[3, 4]).unwrap();
    assert_eq!(t.len(), 4);
    assert_eq!((t[0].metric.as_str(), t[1].metric.as_str()), (METRIC_HAUSDORFF, METRIC_MEAN_ERROR));
    for pair in t.chunks(2) {
        for (h, e) in pair[0].values.iter().zip(&pair[1].values) {
            assert!((h - e).abs() <= f64::EPSILON);
        }
    }
}

fn geometric(n: usize) -> Vec<usize> {
    randset::mixing::geometric_checkpoints(1, n, 4)
}

#[test]
fn csv_output() {
    let t = run_hausdorff_slln(&bounded(1), Target::CoA, 100, &[10, 100], &[2, 1]).unwrap();
    let csv = trajectories_to_csv(&t);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "metric,seed,n,value");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("hausdorff,1,10,"));
}

#[test]
fn unbounded_families_are_rejected() {
    let e = run_hausdorff_slln(&SetProcessSpec::NeedleHalo, Target::A, 10, &[10], &[1]).unwrap_err();
    assert_eq!(e.name(), "UnboundedFamily");
    let e = halo_certificate(&bounded(0), 3, 1).unwrap_err();
    assert!(matches!(e, LabError::WrongFamily { .. }));
    assert!(matches!(exact_cell_expansion(&bounded(0), 0, 1), Err(LabError::ZeroIndex)));
    assert!(matches!(
        cone_tracking(&SetProcessSpec::random_ray_fair(), 1, 1),
        Err(LabError::HorizonTooShort(..))
    ));
}

#[test]
fn expansion_budget() {
    let e = exact_cell_expansion_with_budget(&SetProcessSpec::NeedleHalo, 12, 1, 1000).unwrap_err();
    assert_eq!(e.name(), "GeometryError");
    let ok = exact_cell_expansion(&SetProcessSpec::NeedleHalo, 4, 1).unwrap();
    assert_eq!(ok.cells_before_dedup, 16);
}

#[test]
fn single_sign_paths_have_no_certificate() {
    let all_plus = SetProcessSpec::RandomRay(ScalarDriver::two_state_markov(1.0, [1.0, -1.0], 0).unwrap());
    let t = cone_tracking(&all_plus, 50, 0).unwrap();
    if t.certificate.is_none() {
        assert!(matches!(t.require_certificate(), Err(LabError::NoMixedSigns(50))));
    }
}

#[test]
fn km_verdicts() {
    let probes = vec![Vector::d2(0.0, 0.0), Vector::d2(1.0, 0.0), Vector::d2(3.0, 0.0)];
    let cps = vec![1, 2, 5, 10, 100, 1000];
    let halo = run_km_diagnostics(&SetProcessSpec::NeedleHalo, &KmOptions::new(probes.clone(), 5.0, cps.clone(), 1)).unwrap();
    assert_eq!(halo.verdict, KmVerdict::ConvergesEvidence);
    assert!(halo.excess.last().unwrap() <= &0.01);
    assert_eq!(halo.methods[0], ProxyMethod::Cells);
    assert_eq!(*halo.methods.last().unwrap(), ProxyMethod::Parametric);

    for seed in 0..10 {
        let ray = run_km_diagnostics(&SetProcessSpec::random_ray_fair(), &KmOptions::new(probes.clone(), 5.0, cps.clone(), seed)).unwrap();
        assert_eq!(ray.verdict, KmVerdict::FailsWithCertificate);
        let c = ray.certificate.unwrap();
        // The excess can not drop below the witness's distance to the needle.
        for (i, n) in cps.iter().enumerate() {
            if *n >= c.n0 {
                assert!(ray.excess[i] >= c.witness_distance - 1e-12);
            }
        }
        assert!(c.witness_x.abs().max(c.witness_y.abs()) <= 5.0);
    }

    let bad = KmOptions::new(vec![Vector::d2(0.0, 1.0)], 5.0, cps.clone(), 1);
    assert_eq!(run_km_diagnostics(&SetProcessSpec::NeedleHalo, &bad).unwrap_err().name(), "ProbeOutsideD");
    let small = KmOptions::new(probes, 2.0, cps, 1);
    assert_eq!(run_km_diagnostics(&SetProcessSpec::NeedleHalo, &small).unwrap_err().name(), "WindowTooSmall");
}

#[test]
fn conditions_reports() {
    let dirs = randset::convex_sets::spread_directions(2, 8);
    let ray = theorem_conditions_report(
        &SetProcessSpec::random_ray_fair(),
        &[Vector::d2(1.0, 0.0)],
        &dirs,
        100,
    )
    .unwrap();
    match ray.verdict {
        ConditionsVerdict::HypothesisViolated { which, infinite_term_at, .. } => {
            assert_eq!(which, "iii");
            assert_eq!(infinite_term_at, Some(1));
        }
        other => panic!("{other:?}"),
    }
    let halo = theorem_conditions_report(&SetProcessSpec::NeedleHalo, &[Vector::d2(2.0, 0.0)], &dirs, 100).unwrap();
    assert_eq!(halo.verdict, ConditionsVerdict::HypothesesHoldEvidence);
    let seg = theorem_conditions_report(
        &SetProcessSpec::Segment(markov(0)),
        &[Vector::d1(0.5)],
        &[DualDirection::new(Vector::d1(1.0)).unwrap()],
        200,
    )
    .unwrap();
    assert_eq!(seg.verdict, ConditionsVerdict::HypothesesHoldEvidence);
    let json = serde_json::to_value(&ray).unwrap();
    assert_eq!(json["verdict"]["verdict"], "hypothesis_violated");
}

#[test]
fn parametric_proxies_match_exact_cells() {
    let probes = vec![Vector::d2(0.0, 0.0), Vector::d2(1.0, 0.0), Vector::d2(3.0, 0.0)];
    let cps: Vec<usize> = (1..=10).collect();
    for spec in [SetProcessSpec::NeedleHalo, SetProcessSpec::random_ray_fair()] {
        for seed in 0..5 {
            let mut exact = KmOptions::new(probes.clone(), 5.0, cps.clone(), seed);
            exact.exact_limit = 10;
            let mut param = exact.clone();
            param.exact_limit = 0;
            let a = run_km_diagnostics(&spec, &exact).unwrap();
            let b = run_km_diagnostics(&spec, &param).unwrap();
            assert!(a.methods.iter().all(|m| *m == ProxyMethod::Cells));
            assert!(b.methods.iter().all(|m| *m == ProxyMethod::Parametric));
            for (x, y) in a.excess.iter().zip(&b.excess) {
                assert!((x - y).abs() <= 1e-9, "{}: excess {x} vs {y}", spec.name());
            }
            for (pa, pb) in a.probe_distances.iter().zip(&b.probe_distances) {
                for (x, y) in pa.iter().zip(pb) {
                    assert!((x - y).abs() <= 1e-9, "{}: probe {x} vs {y}", spec.name());
                }
            }
        }
    }
}
