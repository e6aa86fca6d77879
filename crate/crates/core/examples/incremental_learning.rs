//! Merges a corrective demonstration into a learned model and checks that the
//! new rollout clears the obstacle the original one runs into.
//!
//! ```text
//! cargo run -p vsds-shared --example incremental_learning
//! ```

use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::gp::{incremental_update, GpHyperParams, IncrementalConfig};
use vsds_shared::motion::{integrate_reference_path, learn_from_demos, ReshapedDs, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS};
use vsds_shared::sim::Environment;

fn main() -> vsds_shared::Result<()> {
    let ds = fixtures::linear_ds();
    let field = learn_from_demos(&[fixtures::original_demo()], ds, GpHyperParams::default())?;
    let mut env = fixtures::box_environment();
    env.obstacles.push(fixtures::corridor_obstacle());

    let report_path = |name: &str, f: &ReshapedDs, env: &Environment| -> vsds_shared::Result<()> {
        let path = integrate_reference_path(f, DEMO_START, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS)?;
        println!("{name:7} model: {:3} points, rollout collides: {}", f.gp.len(), env.polyline_collides(path.points()));
        Ok(())
    };
    report_path("before", &field, &env)?;

    let correction = fixtures::avoidance_demo().pairs()?;
    let (gp, report) = incremental_update(&field.gp, &correction, &ds, &IncrementalConfig::default())?;
    println!(
        "update: {} removed, {} added, {} degenerate",
        report.removed.len(),
        report.added.len(),
        report.degenerate
    );
    report_path("after", &ReshapedDs::new(ds, gp), &env)?;
    Ok(())
}
