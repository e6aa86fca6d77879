//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use rand::RngExt;

use vsds_shared::authority::{stiffness_from_variance, StiffnessSchedule};
use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::geometry::{Point2, Vec2};
use vsds_shared::gp::{incremental_update, GpDataset, GpHyperParams, GpModel, IncrementalConfig};
use vsds_shared::motion::{
    demo_to_modulation, integrate_reference_path, learn_from_demos, modulation_matrix, rotation_matrix,
    Demonstration, LinearDs, ModulationParams, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS,
};
use vsds_shared::scenario::{HumanKind, Scenario};
use vsds_shared::session::build_guidance;
use vsds_shared::sim::{run_trial, step_master, ControllerKind, MasterState};
use vsds_shared::vsds::{AttractorChain, VsdsParams};

use common::{inside_half_width, random_dataset, rng, NaiveGp};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fixture(name: &str) -> Scenario {
    Scenario::load(fixtures::scenario_dir().join(format!("{name}.json"))).expect("fixture loads")
}

fn gp_oracle() -> Check {
    let started = Instant::now();
    let h = GpHyperParams::default();
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = r.random_range(1..=64);
        let (xs, ys) = random_dataset(&mut r, n);
        let model = GpModel::fit(common::dataset(&xs, &ys), h).map_err(|e| e.to_string())?;
        let oracle = NaiveGp::new(&xs, &ys, h);
        let queries: Vec<Point2> = xs
            .iter()
            .copied()
            .chain((0..16).map(|_| Vec2::new(r.random_range(-0.12..0.12), r.random_range(-0.12..0.12))))
            .collect();
        for q in queries {
            let p = model.predict(q);
            let (phi, kappa, var) = oracle.predict(q);
            worst = worst
                .max((p.mean.phi - phi).abs())
                .max((p.mean.kappa - kappa).abs())
                .max((p.variance - var).abs());
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(worst <= 1e-9 && secs < 5.0, format!("max deviation {worst:.2e}, {secs:.2} s"))
}

fn modulation_round_trip() -> Check {
    let ds = fixtures::linear_ds();
    let mut r = rng(12);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 10_000 {
        let x = Vec2::new(r.random_range(-0.6..0.6), r.random_range(-0.6..0.6));
        let nominal = ds.eval(x);
        if nominal.norm() < 1e-3 {
            continue;
        }
        // speed ratios inside the representable κ range
        let ratio = r.random_range(0.06..9.9);
        let v = rotation_matrix(r.random_range(-PI..PI)) * nominal * ratio;
        let m = demo_to_modulation(x, v, &ds).map_err(|e| e.to_string())?;
        let back = modulation_matrix(m).map_err(|e| e.to_string())? * nominal;
        worst = worst.max(back.distance(v) / v.norm());
        done += 1;
    }
    ensure(worst <= 1e-9, format!("max relative error {worst:.2e} over {done} pairs"))
}

fn recorded_demo() -> Demonstration {
    Demonstration::load(fixtures::demo_dir().join("original.json")).expect("demo fixture loads")
}

fn field_fidelity() -> Check {
    let demo = recorded_demo();
    let field = learn_from_demos(std::slice::from_ref(&demo), fixtures::linear_ds(), GpHyperParams::default())
        .map_err(|e| e.to_string())?;
    let pairs = demo.pairs().map_err(|e| e.to_string())?;
    let good = pairs
        .iter()
        .filter(|(x, v)| field.eval(*x).distance(*v) <= 0.05 * v.norm())
        .count();
    let frac = good as f64 / pairs.len() as f64;
    ensure(frac >= 0.95, format!("{good}/{} demo points within 5% ({:.1}%)", pairs.len(), 100.0 * frac))
}

fn convergence() -> Check {
    let field = learn_from_demos(&[recorded_demo()], fixtures::linear_ds(), GpHyperParams::default())
        .map_err(|e| e.to_string())?;
    let mut failed = Vec::new();
    for i in 0..5 {
        for j in 0..4 {
            let x0 = Vec2::new(-0.5 + 0.1 * i as f64, 0.15 * j as f64);
            if integrate_reference_path(&field, x0, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS).is_err() {
                failed.push(x0);
            }
        }
    }
    ensure(failed.is_empty(), format!("{} of 20 starts non-convergent", failed.len()))
}

fn symmetric_attraction() -> Check {
    let started = Instant::now();
    let s = fixture("nominal");
    let field = s.field().map_err(|e| e.to_string())?;
    let map = s.map().map_err(|e| e.to_string())?;
    let cfg = s.session_config(Some(ControllerKind::Vsds));
    let g = build_guidance(&field, DEMO_START, &map, &cfg, 0.0).map_err(|e| e.to_string())?;
    let len = g.path.arc_length();
    let damping = cfg.controller.vsds.damping;
    let mut worst_final: f64 = 0.0;
    let mut failures = 0;
    for k in 0..20 {
        let station = len * (0.1 + 0.05 * (k / 2) as f64);
        let side = if k % 2 == 0 { 1.0 } else { -1.0 };
        let offset = [0.01, 0.02, 0.03][k % 3] * side;
        let base = g.path.point_at(station);
        let normal = g.path.tangent_at(station).expect("tangent").perp();
        let start = base + normal * offset;

        let mut m = MasterState::at_rest(map.to_master(start));
        let mut last_far = 0.0;
        let mut reached = false;
        while m.t < 20.0 {
            let u_c = g.master_chain.control_force(m.x, m.v, &damping);
            m = step_master(m, u_c, Vec2::ZERO, cfg.mass, cfg.dt);
            let x_r = map.to_remote(m.x);
            if g.path.distance_to(x_r) > 0.01 {
                last_far = m.t;
            }
            if s.environment.at_goal(x_r) {
                reached = true;
                break;
            }
        }
        worst_final = worst_final.max(last_far);
        if !reached || last_far >= m.t {
            failures += 1;
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(
        failures == 0 && secs < 30.0,
        format!("{failures} of 20 failed; latest excursion beyond 0.01 m ends at {worst_final:.2} s; {secs:.2} s"),
    )
}

fn stiffness_schedule() -> Check {
    let s = StiffnessSchedule::default();
    let k = |v| stiffness_from_variance(v, &s);
    let tol = 1e-6 * s.a2;
    let values = (k(0.0) - 1800.0).abs() <= 1e-6
        && (k(0.425) - 1100.0).abs() <= 1e-6
        && k(0.85 + 1e-6) == 400.0
        && k(5.0) == 400.0;
    let continuous = (k(s.sigma_l2 - 1e-9) - k(s.sigma_l2 + 1e-9)).abs() <= tol
        && (k(s.sigma_u2 - 1e-9) - k(s.sigma_u2 + 1e-9)).abs() <= tol;
    let sweep: Vec<f64> = (0..1000).map(|i| k(-0.1 + 1.1 * i as f64 / 999.0)).collect();
    let monotone = sweep.windows(2).all(|w| w[1] <= w[0]);
    ensure(
        values && continuous && monotone,
        format!(
            "k(0)={:.6} k(0.425)={:.6} k(0.9)={:.6} continuous={continuous} monotone={monotone}",
            k(0.0),
            k(0.425),
            k(0.9)
        ),
    )
}

fn tunnel_geometry() -> Check {
    let attractors: Vec<Point2> = (0..10).map(|i| Vec2::new(-0.36 + 0.04 * i as f64, 0.1)).collect();
    let n = attractors.len() - 1;
    let chain = AttractorChain::new(
        attractors,
        vec![Vec2::new(1.0, 0.0); n],
        vec![(250.0, 1800.0); n],
        &VsdsParams::default(),
    )
    .map_err(|e| e.to_string())?;
    let normal = Vec2::new(0.0, 1.0);
    let mut min_gap = f64::INFINITY;
    let mut stations = 0;
    for i in 0..=72 {
        let base = Vec2::new(-0.36 + 0.005 * i as f64, 0.1);
        let wide = inside_half_width(&chain, 0.1, base, normal);
        let narrow = inside_half_width(&chain, 0.8, base, normal);
        min_gap = min_gap.min(wide - narrow);
        stations += 1;
    }
    ensure(min_gap > 0.0, format!("{stations} stations, smallest width difference {min_gap:.4} m"))
}

fn escape_force_ordering() -> Check {
    let peak = |name: &str| -> std::result::Result<f64, String> {
        let out = run_trial(&fixture(name), ControllerKind::Vsds, HumanKind::Escaper).map_err(|e| e.to_string())?;
        out.metrics.peak_escape_force.ok_or_else(|| format!("{name}: no escape"))
    };
    let (c1, c2) = (peak("case1")?, peak("case2")?);
    let repeat = (peak("case1")?, peak("case2")?);
    ensure(
        c1 < c2 && repeat == (c1, c2),
        format!("case 1 {c1:.2} N < case 2 {c2:.2} N, repeatable {}", repeat == (c1, c2)),
    )
}

fn incremental_learning() -> Check {
    let s = fixture("case2");
    let field = s.field().map_err(|e| e.to_string())?;
    let before = integrate_reference_path(&field, s.start, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS)
        .map_err(|e| e.to_string())?;
    let pre_collides = s.environment.polyline_collides(before.points());

    let out = run_trial(&s, ControllerKind::Vsds, HumanKind::Escaper).map_err(|e| e.to_string())?;
    let after = integrate_reference_path(out.session.field(), s.start, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS);
    let (post_clear, reaches) = match &after {
        Ok(p) => (!s.environment.polyline_collides(p.points()), p.points().last() == Some(&s.environment.goal)),
        Err(_) => (false, false),
    };
    ensure(
        pre_collides && out.metrics.escapes == 1 && out.metrics.learned == 1 && post_clear && reaches,
        format!(
            "before: collides={pre_collides}; escapes={} updates={}; after: collision-free={post_clear} reaches goal={reaches}",
            out.metrics.escapes, out.metrics.learned
        ),
    )
}

/// One stored sample, one new sample, and whether pass 1 removed the old one
/// and pass 2 inserted the new one.
fn update_once(
    old: Option<(Point2, ModulationParams)>,
    new: (Point2, Vec2),
    ds: &LinearDs,
    cfg: &IncrementalConfig,
) -> std::result::Result<(bool, bool), String> {
    let dataset = match old {
        Some((x, m)) => GpDataset::new(vec![x], vec![m]),
        None => Ok(GpDataset::default()),
    }
    .map_err(|e| e.to_string())?;
    let model = GpModel::fit(dataset, GpHyperParams::default()).map_err(|e| e.to_string())?;
    let (_, report) = incremental_update(&model, &[new], ds, cfg).map_err(|e| e.to_string())?;
    Ok((!report.removed.is_empty(), report.added.contains(&new.0)))
}

fn algorithm_semantics() -> Check {
    // f_o(x) = (0.25, 0) at x below; dyadic values keep the boundaries exact
    let ds = LinearDs::new(0.5, Vec2::ZERO).map_err(|e| e.to_string())?;
    let x = Vec2::new(-0.5, 0.0);
    let f = ds.eval(x);
    let eps = 1e-9;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut expect = |label: &str, got: bool, want: bool| {
        checked += 1;
        if got != want {
            failures.push(label.to_string());
        }
    };

    let dyadic = IncrementalConfig { r_th: 0.03125, delta_speed: 0.0625, delta_angle: 0.5 };
    let old_m = ModulationParams::IDENTITY;
    for (label, d, removed) in [
        ("r_th - eps", dyadic.r_th - eps, true),
        ("r_th", dyadic.r_th, true),
        ("r_th + eps", dyadic.r_th + eps, false),
    ] {
        let (got, _) = update_once(Some((x + Vec2::new(0.0, d), old_m)), (x, f), &ds, &dyadic)?;
        expect(label, got, removed);
    }

    let speed = |s: f64| Vec2::new(s, 0.0);
    for (cfg, label) in [(dyadic, "dyadic"), (IncrementalConfig::default(), "default")] {
        let edge = f.norm() + cfg.delta_speed;
        for (d, added) in [(-eps, false), (0.0, true), (eps, true)] {
            if label == "default" && d == 0.0 {
                continue;
            }
            let (_, got) = update_once(None, (x, speed(edge + d)), &ds, &cfg)?;
            expect(&format!("{label} speed gap Δ1{d:+e}"), got, added);
        }
        // slower than predicted never counts as a speed discrepancy
        let (_, got) = update_once(None, (x, speed(f.norm() - 2.0 * cfg.delta_speed)), &ds, &cfg)?;
        expect(&format!("{label} negative speed gap"), got, false);
        for (d, added) in [(-1e-7, false), (1e-7, true)] {
            let v = rotation_matrix(cfg.delta_angle + d) * f;
            let (_, got) = update_once(None, (x, v), &ds, &cfg)?;
            expect(&format!("{label} angle Δ2{d:+e}"), got, added);
        }
    }

    // pass 2 predicts with the pass-1 dataset: a stored point that explains
    // the new sample is removed first, so the sample is re-inserted
    let v = speed(0.5);
    let m = demo_to_modulation(x, v, &ds).map_err(|e| e.to_string())?;
    let (removed, added) = update_once(Some((x, m)), (x, v), &ds, &IncrementalConfig::default())?;
    expect("pass 2 after pass 1", removed && added, true);

    ensure(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} boundary cases match")
        } else {
            format!("mismatched: {}", failures.join(", "))
        },
    )
}

fn baseline_harness() -> Check {
    let base = fixture("baseline");
    let mut results = Vec::new();
    for c in [ControllerKind::Vsds, ControllerKind::Flow, ControllerKind::OpenLoop] {
        let out = run_trial(&base, c, HumanKind::Follower).map_err(|e| e.to_string())?;
        results.push((c.name(), out.metrics.success));
    }
    let desync = fixture("desync");
    let peak = |c| -> std::result::Result<f64, String> {
        Ok(run_trial(&desync, c, HumanKind::Follower)
            .map_err(|e| e.to_string())?
            .metrics
            .peak_control_force)
    };
    let (vsds, open) = (peak(ControllerKind::Vsds)?, peak(ControllerKind::OpenLoop)?);
    let all = results.iter().all(|(_, ok)| *ok);
    let summary: Vec<String> = results.iter().map(|(n, ok)| format!("{n}={ok}")).collect();
    ensure(
        all && open > vsds,
        format!("follower success {}; desync peak u_c openloop {open:.2} N vs vsds {vsds:.2} N", summary.join(" ")),
    )
}

fn determinism() -> Check {
    let mut runs = 0;
    let mut mismatched = Vec::new();
    for s in fixtures::all_scenarios() {
        let s = fixture(&s.name);
        for c in [ControllerKind::Vsds, ControllerKind::Flow, ControllerKind::OpenLoop, ControllerKind::Free] {
            let log = || -> std::result::Result<String, String> {
                run_trial(&s, c, s.human.kind)
                    .and_then(|o| o.log_jsonl())
                    .map_err(|e| e.to_string())
            };
            if log()? != log()? {
                mismatched.push(format!("{}/{}", s.name, c.name()));
            }
            runs += 1;
        }
    }
    ensure(mismatched.is_empty(), format!("{runs} scenario/controller pairs, mismatched: {mismatched:?}"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("gp-oracle-equivalence", gp_oracle),
        ("modulation-round-trip", modulation_round_trip),
        ("reshaped-field-fidelity", field_fidelity),
        ("convergence-grid", convergence),
        ("vsds-symmetric-attraction", symmetric_attraction),
        ("stiffness-schedule", stiffness_schedule),
        ("tunnel-geometry", tunnel_geometry),
        ("escape-force-ordering", escape_force_ordering),
        ("incremental-learning-obstacle", incremental_learning),
        ("incremental-update-semantics", algorithm_semantics),
        ("baseline-harness", baseline_harness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
