use std::f64::consts::PI;

use elastica_core::critical::{solve, SolveOptions};
use elastica_core::energy::*;
use elastica_core::frames::*;
use elastica_core::nelder_mead::{minimize, NelderMeadOptions};
use elastica_core::shooting::{table_rows, trial_rng};
use proptest::prelude::*;
use rand::Rng;

fn smooth_profile(len: f64, n: usize, k: [f64; 3], t: [f64; 3]) -> CurvatureTorsionProfile {
    CurvatureTorsionProfile::from_fn(len, n, |s| {
        (
            k[0] + k[1] * (k[2] * s).sin(),
            t[0] + t[1] * (t[2] * s).cos(),
        )
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frames_stay_orthonormal(
        len in 0.5f64..20.0, n in 100usize..600,
        k in prop::array::uniform3(-3.0f64..3.0), t in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let curve = integrate_canonical(&smooth_profile(len, n, k, t)).unwrap();
        prop_assert!(curve.max_orthonormality_error() <= 1e-12);
        for f in &curve.frames {
            prop_assert!((f.matrix().determinant() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn chords_are_at_most_one_step(
        len in 0.5f64..20.0, n in 10usize..400,
        k in prop::array::uniform3(-3.0f64..3.0), t in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let curve = integrate_canonical(&smooth_profile(len, n, k, t)).unwrap();
        let h = curve.step();
        for w in curve.positions.windows(2) {
            prop_assert!((w[1] - w[0]).norm() <= h * (1.0 + 1e-14));
        }
        prop_assert_eq!(curve.positions[0], Vec3::zeros());
    }

    #[test]
    fn discrete_frame_equations(
        k in prop::array::uniform3(0.2f64..2.0), t in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let n = 2000;
        let prof = smooth_profile(5.0, n, k, t);
        let curve = integrate_canonical(&prof).unwrap();
        let h = curve.step();
        let (kap, tau) = (prof.kappa(), prof.tau());
        for i in 1..n {
            let f = &curve.frames[i];
            let dt = (curve.frames[i + 1].t - curve.frames[i - 1].t) / (2.0 * h);
            let dn = (curve.frames[i + 1].n - curve.frames[i - 1].n) / (2.0 * h);
            let db = (curve.frames[i + 1].b - curve.frames[i - 1].b) / (2.0 * h);
            prop_assert!((dt - kap[i] * f.n).norm() <= 1e-4);
            prop_assert!((dn - (-kap[i] * f.t + tau[i] * f.b)).norm() <= 1e-4);
            prop_assert!((db + tau[i] * f.n).norm() <= 1e-4);
            prop_assert!(dt.dot(&f.b).abs() <= 1e-4);
        }
    }

    #[test]
    fn constant_round_trip(k in -2.0f64..2.0, t in -2.0f64..2.0) {
        let prof = CurvatureTorsionProfile::constant(2.0 * PI, 1000, k, t).unwrap();
        let back = extract_curvature_torsion(&integrate_canonical(&prof).unwrap()).unwrap();
        for (a, b) in back.kappa().iter().zip(back.tau()) {
            prop_assert!((a - k).abs() <= 1e-5);
            if k.abs() > 1e-3 {
                prop_assert!((b - t).abs() <= 1e-5);
            }
        }
    }

    #[test]
    fn simpson_is_exact_on_cubics(c in prop::array::uniform4(-2.0f64..2.0), len in 0.5f64..5.0) {
        // f = a² with a(s)² a cubic in s: take a = sqrt of a positive cubic.
        let cubic = |s: f64| 10.0 + c[0] + c[1] * s + c[2] * s * s + c[3] * s * s * s;
        let lo = (0..=100).map(|i| cubic(len * i as f64 / 100.0)).fold(f64::INFINITY, f64::min);
        prop_assume!(lo > 0.0);
        let prof = CurvatureTorsionProfile::from_fn(len, 64, |s| (cubic(s).sqrt(), 0.0)).unwrap();
        let exact = (10.0 + c[0]) * len + c[1] * len.powi(2) / 2.0 + c[2] * len.powi(3) / 3.0 + c[3] * len.powi(4) / 4.0;
        let e = evaluate_energy(&EnergyDensity::euler(), &prof);
        prop_assert!((e - exact).abs() <= 1e-12 * exact.abs());
    }

    #[test]
    fn nelder_mead_never_worse_than_start(x0 in prop::array::uniform3(-3.0f64..3.0)) {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).abs() + x[2].powi(4);
        let r = minimize(f, &x0, &NelderMeadOptions { max_iterations: 200, ..Default::default() });
        prop_assert!(r.value <= f(&x0));
    }
}

#[test]
fn sadowsky_seam_is_continuous() {
    let d = EnergyDensity::sadowsky();
    let mut rng = trial_rng(2024, 0);
    for _ in 0..1000 {
        let mag: f64 = rng.gen_range(0.01..10.0);
        let b = if rng.gen_bool(0.5) { mag } else { -mag };
        let mut gaps = Vec::new();
        for eps in [1e-3, 1e-4, 1e-5] {
            let (hi, _, _) = d.evaluate(0.0, b.abs() + eps, b);
            let (lo, _, _) = d.evaluate(0.0, b.abs() - eps, b);
            gaps.push((hi - lo).abs());
        }
        assert!(
            gaps[1] <= gaps[0] * 0.2 && gaps[2] <= gaps[1] * 0.2,
            "{gaps:?}"
        );
        let (_, fa1, fb1) = SadowskyBranch::Bending.evaluate(b.abs(), b);
        let (_, fa2, fb2) = SadowskyBranch::Twist.evaluate(b.abs(), b);
        assert!((fa1 - fa2).abs() <= 1e-10 * (1.0 + fa1.abs()));
        assert!((fb1 - fb2).abs() <= 1e-10 * (1.0 + fb1.abs()));
    }
}

#[test]
fn sadowsky_midpoint_convexity_on_wide_box() {
    let opts = ProbeOptions {
        a_range: (-10.0, 10.0),
        b_range: (-10.0, 10.0),
        a_samples: 21,
        b_samples: 21,
        convexity_pairs: 100_000,
        seed: 5,
        ..Default::default()
    };
    let report = probe_density(&EnergyDensity::sadowsky(), &opts).unwrap();
    assert_eq!(report.convexity.count, 0, "{:?}", report.convexity.worst);
    assert_eq!(report.convexity_pairs, 100_000);
}

#[test]
fn catalog_partials_match_differences() {
    for d in [
        EnergyDensity::euler(),
        EnergyDensity::quadratic(),
        EnergyDensity::sadowsky(),
        EnergyDensity::langer_singer(0.5, 1.0, 2.0),
        EnergyDensity::custom(1.0, 3.0, 2.0).unwrap(),
    ] {
        let report = probe_density(
            &d,
            &ProbeOptions {
                convexity_pairs: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            report.max_partial_deviation <= 1e-6,
            "{}: {}",
            d.name(),
            report.max_partial_deviation
        );
    }
}

#[test]
fn trial_circle_energy() {
    for len in [1.0, 2.0 * PI, 10.0] {
        let k = 2.0 * PI / len;
        let prof = CurvatureTorsionProfile::constant(len, 256, k, 0.0).unwrap();
        let e = evaluate_energy(&EnergyDensity::euler(), &prof);
        assert!((e - 4.0 * PI * PI / len).abs() <= 1e-12 * e);
    }
}

#[test]
fn circumference_row_is_a_planar_loop() {
    let row = table_rows(1).unwrap()[0].params;
    let sol = solve(&row, &SolveOptions::default()).unwrap();
    let curve = integrate_canonical(&sol.profile().unwrap()).unwrap();
    assert!(curve.positions.iter().all(|r| r.z == 0.0));
    let report = closure_defect(&curve, ClosureMode::Planar).unwrap();
    assert!(report.defect < 5e-2);
    let diameter = curve.positions.iter().map(|r| r.norm()).fold(0.0, f64::max);
    assert!((diameter - 2.0).abs() < 5e-2);
}

#[test]
fn lemniscate_closure_integrals() {
    let row = table_rows(1).unwrap()[1].params;
    let sol = solve(&row, &SolveOptions::default()).unwrap();
    let (c, s) = planar_closure_integrals(&sol.profile().unwrap()).unwrap();
    assert!(c.abs() + s.abs() <= 1e-1, "{c} {s}");
}

#[test]
fn circle_closure_converges_at_second_order() {
    let defect = |n: usize| {
        let prof =
            CurvatureTorsionProfile::from_fn(2.0 * PI, n, |s| (1.0 + 0.3 * s.sin(), 0.0)).unwrap();
        let curve = integrate_canonical(&prof).unwrap();
        let fine =
            CurvatureTorsionProfile::from_fn(2.0 * PI, 16 * n, |s| (1.0 + 0.3 * s.sin(), 0.0))
                .unwrap();
        let reference = integrate_canonical(&fine).unwrap();
        (curve.end().0 - reference.end().0).norm()
    };
    let (e1, e2) = (defect(200), defect(400));
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.2, "{order}");
}
