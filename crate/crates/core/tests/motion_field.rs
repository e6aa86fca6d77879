mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::RngExt;

use vsds_shared::fixtures;
use vsds_shared::geometry::{Mat2, Vec2};
use vsds_shared::gp::{GpDataset, GpHyperParams, GpModel};
use vsds_shared::motion::{
    demo_to_modulation, integrate_reference_path, learn_from_demos, modulation_matrix, rotation_matrix,
    LinearDs, ModulationParams, ReshapedDs, KAPPA_MAX, KAPPA_MIN,
};
use vsds_shared::Error;

fn base() -> LinearDs {
    fixtures::linear_ds()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rotation_is_orthonormal(phi in -20.0f64..20.0) {
        let r = rotation_matrix(phi);
        let e = r * r.transpose() - Mat2::IDENTITY;
        prop_assert!(e.norm() < 1e-12);
        prop_assert!((r.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modulation_round_trip(
        y in -0.6f64..0.6, z in -0.6f64..0.6,
        phi in -PI..PI, ratio in 0.06f64..9.9,
    ) {
        let x = Vec2::new(y, z);
        let f = base().eval(x);
        prop_assume!(f.norm() > 1e-3);
        let v = rotation_matrix(phi) * f * ratio;
        let m = demo_to_modulation(x, v, &base()).unwrap();
        let back = modulation_matrix(m).unwrap() * f;
        prop_assert!(back.distance(v) <= 1e-9 * v.norm());
    }

    #[test]
    fn determinant_is_squared_scale(phi in -PI..PI, kappa in -0.9f64..5.0) {
        let t = modulation_matrix(ModulationParams { phi, kappa }).unwrap();
        prop_assert!((t.det() - (1.0 + kappa).powi(2)).abs() < 1e-9 * (1.0 + kappa).powi(2));
    }

    #[test]
    fn clamped_kappa_stays_in_range(ratio in 1e-3f64..100.0) {
        let x = Vec2::new(-0.3, 0.1);
        let v = base().eval(x) * ratio;
        let m = demo_to_modulation(x, v, &base()).unwrap();
        prop_assert!((KAPPA_MIN..=KAPPA_MAX).contains(&m.kappa));
    }
}

#[test]
fn modulation_examples() {
    let t = modulation_matrix(ModulationParams { phi: FRAC_PI_2, kappa: 1.0 }).unwrap();
    assert!((t * Vec2::new(1.0, 0.0)).distance(Vec2::new(0.0, 2.0)) < 1e-15);
    assert!(matches!(
        modulation_matrix(ModulationParams { phi: 0.0, kappa: -1.0 }),
        Err(Error::KappaOutOfRange(_))
    ));
    // f_o(x) = (0, -1) and (1, 0) with unit gain
    let ds = LinearDs::new(1.0, Vec2::ZERO).unwrap();
    let m = demo_to_modulation(Vec2::new(0.0, 1.0), Vec2::new(0.0, -0.5), &ds).unwrap();
    assert!(m.phi.abs() < 1e-15 && (m.kappa + 0.5).abs() < 1e-15);
    let m = demo_to_modulation(Vec2::new(-1.0, 0.0), Vec2::new(0.0, 2.0), &ds).unwrap();
    assert!((m.phi - FRAC_PI_2).abs() < 1e-15 && (m.kappa - 1.0).abs() < 1e-15);
    assert!(matches!(
        demo_to_modulation(Vec2::ZERO, Vec2::new(1.0, 0.0), &ds),
        Err(Error::DegenerateSample { .. })
    ));
}

#[test]
fn empty_model_reproduces_linear_system() {
    let f = ReshapedDs::unmodulated(base());
    let mut r = common::rng(3);
    for _ in 0..1000 {
        let x = Vec2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        assert_eq!(f.eval(x), base().eval(x));
    }
}

#[test]
fn reshaping_scales_speed_by_one_plus_kappa() {
    let field = learn_from_demos(&[fixtures::original_demo()], base(), GpHyperParams::default()).unwrap();
    let mut r = common::rng(4);
    for _ in 0..500 {
        let x = Vec2::new(r.random_range(-0.5..0.0), r.random_range(-0.05..0.4));
        let m = field.modulation_at(x);
        let expected = (1.0 + m.kappa) * base().eval(x).norm();
        assert!((field.eval(x).norm() - expected).abs() <= 1e-12 * expected.max(1.0));
    }
    assert_eq!(field.eval(fixtures::GOAL), Vec2::ZERO);
}

#[test]
fn single_demo_pair_is_reproduced() {
    let x = Vec2::new(-0.2, 0.1);
    let v = Vec2::new(0.05, 0.12);
    let m = demo_to_modulation(x, v, &base()).unwrap();
    let h = GpHyperParams { noise_var: 1e-8, ..Default::default() };
    let gp = GpModel::fit(GpDataset::new(vec![x], vec![m]).unwrap(), h).unwrap();
    let out = ReshapedDs::new(base(), gp).eval(x);
    assert!((out.norm() - v.norm()).abs() <= 0.05 * v.norm());
    assert!(out.cross(v).atan2(out.dot(v)).abs() <= 0.05);
}

#[test]
fn linear_path_decays_exponentially() {
    let ds = LinearDs::new(0.4, Vec2::ZERO).unwrap();
    let path = integrate_reference_path(&ReshapedDs::unmodulated(ds), Vec2::new(1.0, 0.0), 1e-3, 0.01, 100_000).unwrap();
    let pts = path.points();
    assert!(pts.windows(2).all(|w| w[1].norm() <= w[0].norm()));
    // steps until |x| < 0.01 under x_{k+1} = (1 - 0.4 dt) x_k
    let steps = ((0.01f64).ln() / (1.0 - 0.4e-3f64).ln()).ceil() as usize;
    assert_eq!(pts.len() - 1, steps);
    let t = steps as f64 * 1e-3;
    assert!((t - (100.0f64).ln() / 0.4).abs() < 0.01);
    assert_eq!(*pts.last().unwrap(), Vec2::ZERO);
}

#[test]
fn path_from_goal_is_just_the_goal() {
    let f = ReshapedDs::unmodulated(base());
    let path = integrate_reference_path(&f, fixtures::GOAL, 1e-3, 0.01, 10).unwrap();
    assert_eq!(path.points(), &[fixtures::GOAL]);
}

#[test]
fn non_convergence_is_reported() {
    let f = ReshapedDs::unmodulated(base());
    let err = integrate_reference_path(&f, Vec2::new(1.0, 0.0), 1e-3, 0.01, 100).unwrap_err();
    assert!(matches!(err, Error::NoConvergence { steps: 100 }));
}

#[test]
fn learned_path_tracks_the_demonstration() {
    let demo = fixtures::original_demo();
    let field = learn_from_demos(std::slice::from_ref(&demo), base(), GpHyperParams::default()).unwrap();
    let path = integrate_reference_path(&field, fixtures::DEMO_START, 1e-3, 0.01, 100_000).unwrap();
    let demo_path = vsds_shared::motion::ReferencePath::new(
        demo.pairs().unwrap().iter().map(|p| p.0).collect(),
        fixtures::GOAL,
    )
    .unwrap();
    let worst = path.points().iter().map(|&p| demo_path.distance_to(p)).fold(0.0, f64::max);
    assert!(worst < 0.02, "path strays {worst} m from the demonstration");
}
