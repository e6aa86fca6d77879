//! The reference task: a box with an open top, a goal inside it, synthetic
//! demonstrations entering from above, and the scenarios built on them.
//!
//! Everything here is deterministic; `examples/write_fixtures.rs` writes the
//! same data to `fixtures/` as JSON.

use std::path::{Path, PathBuf};

use crate::geometry::{Point2, Rect, Vec2};
use crate::gp::GpHyperParams;
use crate::motion::{Demonstration, LinearDs, ReferencePath};
use crate::scenario::{HumanConfig, HumanKind, ModelSpec, Scenario, WorkspaceConfig};
use crate::session::SessionConfig;
use crate::sim::environment::Environment;

pub const GOAL: Point2 = Vec2::new(0.0, 0.0);
pub const DEMO_RATE_HZ: f64 = 50.0;
/// Gain of the base linear system (1/s).
pub const LINEAR_GAIN: f64 = 0.4;

/// Start of the demonstrations, left of and above the box.
pub const DEMO_START: Point2 = Vec2::new(-0.42, 0.16);
/// Far start whose straight route runs into the left wall.
pub const FAR_LOW_START: Point2 = Vec2::new(-0.50, -0.02);
/// Far start above the demonstrations.
pub const FAR_HIGH_START: Point2 = Vec2::new(-0.30, 0.45);

pub fn linear_ds() -> LinearDs {
    LinearDs { gain: LINEAR_GAIN, attractor: GOAL }
}

/// Box walls and the ground, remote frame.
pub fn box_environment() -> Environment {
    Environment {
        walls: vec![
            Rect::new(Vec2::new(-0.17, -0.08), Vec2::new(-0.15, 0.10)),
            Rect::new(Vec2::new(0.15, -0.08), Vec2::new(0.17, 0.10)),
            Rect::new(Vec2::new(-0.17, -0.10), Vec2::new(0.17, -0.08)),
            Rect::new(Vec2::new(-1.0, -0.12), Vec2::new(1.0, -0.10)),
        ],
        obstacles: Vec::new(),
        goal: GOAL,
        goal_tol: 0.01,
    }
}

/// Obstacle placed across the demonstrated corridor.
pub fn corridor_obstacle() -> Rect {
    Rect::new(Vec2::new(-0.19, 0.25), Vec2::new(-0.11, 0.31))
}

/// Via points of the original demonstration: over the left wall in an arc,
/// then straight down into the box.
pub fn demo_via_points() -> Vec<Point2> {
    vec![
        DEMO_START,
        Vec2::new(-0.32, 0.17),
        Vec2::new(-0.24, 0.22),
        Vec2::new(-0.15, 0.28),
        Vec2::new(-0.06, 0.24),
        Vec2::new(-0.01, 0.13),
        Vec2::new(0.0, 0.05),
        GOAL,
    ]
}

/// Via points of the route that passes under the corridor obstacle.
pub fn avoidance_via_points() -> Vec<Point2> {
    vec![
        DEMO_START,
        Vec2::new(-0.28, 0.16),
        Vec2::new(-0.14, 0.15),
        Vec2::new(-0.04, 0.11),
        Vec2::new(0.0, 0.04),
        GOAL,
    ]
}

/// Route from the low far start over the left wall into the box.
pub fn far_low_via_points() -> Vec<Point2> {
    vec![
        FAR_LOW_START,
        Vec2::new(-0.47, 0.10),
        Vec2::new(-0.36, 0.18),
        Vec2::new(-0.22, 0.22),
        Vec2::new(-0.08, 0.20),
        Vec2::new(-0.01, 0.12),
        Vec2::new(0.0, 0.04),
        GOAL,
    ]
}

/// Uniform Catmull–Rom spline through `via`, sampled densely.
pub fn catmull_rom(via: &[Point2], per_segment: usize) -> Vec<Point2> {
    if via.len() < 2 {
        return via.to_vec();
    }
    let at = |i: isize| via[i.clamp(0, via.len() as isize - 1) as usize];
    let mut out = vec![via[0]];
    for i in 0..via.len() as isize - 1 {
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        for k in 1..=per_segment {
            let t = k as f64 / per_segment as f64;
            let (t2, t3) = (t * t, t * t * t);
            let p = (p1 * 2.0
                + (p2 - p0) * t
                + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * t2
                + (p1 * 3.0 - p0 - p2 * 3.0 + p3) * t3)
                * 0.5;
            out.push(p);
        }
    }
    out
}

/// A demonstration along the spline through `via`, sampled at `rate_hz`.
/// Speed is `min(v_max, decel · remaining arc length)`; sampling stops when
/// less than 5 mm remain.
pub fn synthesize_demo(via: &[Point2], rate_hz: f64, v_max: f64, decel: f64) -> Demonstration {
    let goal = *via.last().expect("at least one via point");
    let dense = catmull_rom(via, 200);
    let path = ReferencePath::new(dense, goal).expect("finite via points");
    let length = path.arc_length();
    let dt = 1.0 / rate_hz;
    let mut s = 0.0;
    let mut pairs = Vec::new();
    while length - s >= 0.005 {
        let speed = v_max.min(decel * (length - s));
        let tangent = path.tangent_at(s).unwrap_or(Vec2::ZERO);
        pairs.push((path.point_at(s), tangent * speed));
        s += speed * dt;
    }
    Demonstration::from_pairs(rate_hz, &pairs)
}

pub fn original_demo() -> Demonstration {
    synthesize_demo(&demo_via_points(), DEMO_RATE_HZ, 0.25, 0.8)
}

pub fn avoidance_demo() -> Demonstration {
    synthesize_demo(&avoidance_via_points(), DEMO_RATE_HZ, 0.25, 0.8)
}

/// Dense path through the via points, for scripted humans.
pub fn intent_path(via: &[Point2]) -> Vec<Point2> {
    catmull_rom(via, 40)
}

/// Directory holding the committed scenario files.
pub fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/scenarios")
}

/// Directory holding the committed demonstration files.
pub fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demos")
}

/// Path of the original demonstration relative to the scenario files. demonstration under `fixtures/demos`.
pub const DEMO_FILE: &str = "../demos/original.json";

fn base(name: &str, start: Point2) -> Scenario {
    Scenario {
        name: name.into(),
        environment: box_environment(),
        linear_ds: linear_ds(),
        hyper: GpHyperParams::default(),
        model: ModelSpec::DemoFiles(vec![DEMO_FILE.into()]),
        start,
        workspace: WorkspaceConfig::default(),
        session: SessionConfig::default(),
        human: HumanConfig::default(),
        t_max: 60.0,
        seed: 7,
        base_dir: Some(scenario_dir()),
    }
}

/// Start on the demonstration, passive human.
pub fn nominal() -> Scenario {
    base("nominal", DEMO_START)
}

/// Start far above the demonstrations, passive human.
pub fn far_start() -> Scenario {
    base("far-start", FAR_HIGH_START)
}

/// Far start whose reference path hits the box; the operator escapes and
/// shows a way over the wall.
pub fn case1() -> Scenario {
    let mut s = base("case1", FAR_LOW_START);
    s.human = HumanConfig {
        kind: HumanKind::Escaper,
        direction: Vec2::new(0.0, 1.0),
        post_escape_path: Some(intent_path(&far_low_via_points())),
        ..HumanConfig::default()
    };
    s
}

/// Start on the demonstration with an obstacle in its corridor; the operator
/// escapes and shows a way underneath.
pub fn case2() -> Scenario {
    let mut s = base("case2", DEMO_START);
    s.environment.obstacles.push(corridor_obstacle());
    s.human = HumanConfig {
        kind: HumanKind::Escaper,
        ramp_rate: 150.0,
        ramp_start: 0.95,
        direction: Vec2::new(0.0, -1.0),
        post_escape_path: Some(intent_path(&avoidance_via_points())),
        ..HumanConfig::default()
    };
    s
}

/// A human following the demonstrated route, for controller comparisons.
pub fn baseline() -> Scenario {
    let mut s = base("baseline", DEMO_START);
    s.human = HumanConfig {
        kind: HumanKind::Follower,
        intent_path: Some(intent_path(&demo_via_points())),
        ..HumanConfig::default()
    };
    s.session.controller.learning_enabled = false;
    s
}

/// As [`baseline`], but the human holds still for three seconds first.
pub fn desync() -> Scenario {
    let mut s = baseline();
    s.name = "desync".into();
    s.human.hold_time = 3.0;
    s
}

/// Every scenario, keyed by file stem.
pub fn all_scenarios() -> Vec<Scenario> {
    vec![nominal(), far_start(), case1(), case2(), baseline(), desync()]
}

pub fn scenario_by_name(name: &str) -> Option<Scenario> {
    all_scenarios().into_iter().find(|s| s.name == name)
}
