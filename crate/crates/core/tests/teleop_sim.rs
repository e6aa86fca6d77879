use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::geometry::{Mat2, Point2, Rect, Vec2};
use vsds_shared::motion::{LinearDs, ReshapedDs, PATH_GOAL_TOL, PATH_MAX_STEPS};
use vsds_shared::scenario::HumanKind;
use vsds_shared::session::ModeKind;
use vsds_shared::sim::{
    mean_squared_jerk, openloop_impedance_controller, run_trial, step_master, ControllerKind, Environment,
    MasterState, OpenLoopReference, WorkspaceMap,
};

#[test]
fn master_step_examples() {
    let s = MasterState { x: Vec2::new(0.1, 0.2), v: Vec2::new(0.5, -1.0), t: 0.0 };
    let n = step_master(s, Vec2::ZERO, Vec2::ZERO, 1.0, 1e-3);
    assert_eq!(n.x, Vec2::new(0.1 + 0.5e-3, 0.2 - 1e-3));
    assert_eq!(n.v, s.v);
    let n = step_master(MasterState::at_rest(Vec2::ZERO), Vec2::new(0.6, 0.0), Vec2::new(0.4, 0.0), 1.0, 1e-3);
    assert_eq!(n.v, Vec2::new(0.001, 0.0));
    assert_eq!(n.x, Vec2::new(1e-6, 0.0));
    assert_eq!(n.t, 1e-3);
}

#[test]
fn spring_damper_matches_analytic_oscillator() {
    let (k, d, m, dt): (f64, f64, f64, f64) = (250.0, 25.0, 1.0, 1e-3);
    let x0 = 0.01;
    let w0 = (k / m).sqrt();
    let zeta = d / (2.0 * (k * m).sqrt());
    let wd = w0 * (1.0 - zeta * zeta).sqrt();
    let analytic = |t: f64| (-zeta * w0 * t).exp() * x0 * ((wd * t).cos() + zeta * w0 / wd * (wd * t).sin());

    let mut s = MasterState::at_rest(Vec2::new(x0, 0.0));
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let u = s.x * -k - s.v * d;
        s = step_master(s, u, Vec2::ZERO, m, dt);
        worst = worst.max((s.x.y - analytic(s.t)).abs());
        assert_eq!(s.x.z, 0.0);
    }
    assert!(worst <= 0.01 * x0, "max deviation {worst}");
}

#[test]
fn workspace_map_round_trip() {
    let w = WorkspaceMap::new(0.2, Vec2::new(0.05, -0.02), Vec2::new(-0.42, 0.16)).unwrap();
    for i in 0..50 {
        for j in 0..50 {
            let x = Vec2::new(-1.0 + 0.04 * i as f64, -1.0 + 0.04 * j as f64);
            assert!(w.to_remote(w.to_master(x)).distance(x) < 1e-12);
            assert!(w.to_master(w.to_remote(x)).distance(x) < 1e-12);
        }
    }
    let v = Vec2::new(0.3, -0.1);
    assert!(w.velocity_to_remote(w.velocity_to_master(v)).distance(v) < 1e-15);
}

#[test]
fn collision_conventions() {
    let env = Environment {
        walls: vec![Rect::new(Vec2::new(0.0, 0.0), Vec2::new(0.1, 0.1))],
        obstacles: vec![],
        goal: Vec2::new(0.5, 0.5),
        goal_tol: 0.01,
    };
    assert!(!env.check_collision(Vec2::new(-0.2, 0.3), Vec2::new(0.3, 0.3)));
    assert!(env.check_collision(Vec2::new(-0.2, 0.05), Vec2::new(0.05, 0.05)));
    // touching the boundary counts
    assert!(env.check_collision(Vec2::new(-0.2, 0.1), Vec2::new(0.3, 0.1)));
    assert!(env.check_collision(Vec2::new(0.1, 0.2), Vec2::new(0.1, 0.1)));
}

#[test]
fn jerk_of_a_cubic() {
    let dt = 1e-3;
    let (a, b) = (1.2, -0.5);
    let xs: Vec<Point2> = (0..=1000)
        .map(|k| {
            let t = k as f64 * dt;
            Vec2::new(a * t.powi(3), b * t.powi(3) + 0.1 * t)
        })
        .collect();
    let expected = 36.0 * (a * a + b * b);
    let got = mean_squared_jerk(&xs, dt);
    assert!((got - expected).abs() <= 0.01 * expected, "{got} vs {expected}");
}

#[test]
fn openloop_force_grows_while_the_master_is_held() {
    let field = ReshapedDs::unmodulated(LinearDs::new(0.4, Vec2::ZERO).unwrap());
    let map = WorkspaceMap::new(0.2, Vec2::ZERO, DEMO_START).unwrap();
    let r = OpenLoopReference::integrate(&field, &map, DEMO_START, 1e-3, PATH_GOAL_TOL, PATH_MAX_STEPS).unwrap();
    let (k, d) = (Mat2::diag(250.0, 1800.0), Mat2::scalar(25.0));
    let held = map.to_master(DEMO_START);
    let forces: Vec<f64> = (0..=((r.duration() + 1.0) / 0.01) as usize)
        .map(|i| openloop_impedance_controller(i as f64 * 0.01, held, Vec2::ZERO, &r, &k, &d).norm())
        .collect();
    assert_eq!(forces[0], 0.0);
    assert!(forces.windows(2).all(|w| w[1] >= w[0]));
    let plateau = *forces.last().unwrap();
    let at_end = openloop_impedance_controller(r.duration() + 10.0, held, Vec2::ZERO, &r, &k, &d).norm();
    assert_eq!(plateau, at_end);
    // past the end only the goal is tracked
    let goal_m = map.to_master(fixtures::GOAL);
    assert_eq!(openloop_impedance_controller(r.duration() + 1.0, goal_m, Vec2::ZERO, &r, &k, &d), Vec2::ZERO);
}

#[test]
fn passive_vsds_reaches_the_goal_with_bounded_energy() {
    let s = fixtures::nominal();
    let out = run_trial(&s, ControllerKind::Vsds, HumanKind::Passive).unwrap();
    assert!(out.metrics.success);
    // elastic energy of the stiffest spring stretched across one master-side segment
    let seg = s.workspace.beta * s.session.controller.vsds.spacing;
    let bound = 0.5 * 1800.0 * seg * seg;
    let peak_ke = out.log.iter().map(|r| 0.5 * s.session.mass * r.v_m.norm_squared()).fold(0.0, f64::max);
    assert!(peak_ke < bound, "kinetic energy {peak_ke} exceeds {bound}");
}

#[test]
fn far_start_stays_inside_its_tunnel() {
    let s = fixtures::far_start();
    let out = run_trial(&s, ControllerKind::Vsds, HumanKind::Passive).unwrap();
    assert!(out.metrics.success);
    assert_eq!(out.metrics.escapes, 0);
    assert!(out.log.iter().all(|r| r.mode == ModeKind::Guided));
}

#[test]
fn free_passive_times_out() {
    let mut s = fixtures::nominal();
    s.t_max = 2.0;
    let out = run_trial(&s, ControllerKind::Free, HumanKind::Passive).unwrap();
    assert!(!out.metrics.success && !out.metrics.goal_reached && !out.metrics.collision);
    assert!((out.metrics.execution_time - 2.0).abs() < 1e-9);
    assert!(out.log.iter().all(|r| r.x_r == s.start && r.u_c == Vec2::ZERO));
}

#[test]
fn flow_follows_the_field_to_the_goal() {
    let out = run_trial(&fixtures::nominal(), ControllerKind::Flow, HumanKind::Passive).unwrap();
    assert!(out.metrics.success);
}

#[test]
fn success_flag_matches_the_log() {
    for s in fixtures::all_scenarios() {
        for c in [ControllerKind::Vsds, ControllerKind::Flow, ControllerKind::OpenLoop] {
            let out = run_trial(&s, c, s.human.kind).unwrap();
            let xs: Vec<Point2> = out.log.iter().map(|r| r.x_r).collect();
            let at_goal = s.environment.at_goal(*xs.last().unwrap());
            assert_eq!(out.metrics.goal_reached, at_goal, "{} {}", s.name, c.name());
            if out.metrics.success {
                assert!(!s.environment.polyline_collides(&xs), "{} {}", s.name, c.name());
            }
            assert!(out.log.windows(2).all(|w| w[1].t > w[0].t));
        }
    }
}

#[test]
fn telemetry_runs_at_sixty_hertz() {
    let out = run_trial(&fixtures::nominal(), ControllerKind::Vsds, HumanKind::Passive).unwrap();
    let steps: Vec<f64> = out.log[..out.log.len() - 1].windows(2).map(|w| w[1].t - w[0].t).collect();
    assert!(steps.iter().all(|dt| (dt - 0.017).abs() < 1e-9));
}
