//! Learns a reshaped field from one demonstration and compares its rollout
//! with the demonstrated path and with the plain linear system.
//!
//! ```text
//! cargo run -p vsds-shared --example learn_field
//! ```

use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::{
    integrate_reference_path, learn_from_demos, ReferencePath, ReshapedDs, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS,
};

fn main() -> vsds_shared::Result<()> {
    let demo = fixtures::original_demo();
    let field = learn_from_demos(std::slice::from_ref(&demo), fixtures::linear_ds(), GpHyperParams::default())?;
    println!("{} samples, {} kept as GP points", demo.samples.len(), field.gp.len());

    let demo_points: Vec<_> = demo.pairs()?.into_iter().map(|(x, _)| x).collect();
    let demo_path = ReferencePath::new(demo_points, fixtures::GOAL)?;
    let linear = ReshapedDs::unmodulated(fixtures::linear_ds());
    for (name, f) in [("learned", &field), ("linear", &linear)] {
        let path = integrate_reference_path(f, DEMO_START, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS)?;
        let worst = path.points().iter().map(|&p| demo_path.distance_to(p)).fold(0.0, f64::max);
        println!("{name:8} rollout: {} steps, {:.3} m long, max {:.4} m from the demo", path.len(), path.arc_length(), worst);
    }

    println!("\n   y      z     phi    kappa   var");
    for &(y, z) in &[(-0.42, 0.16), (-0.3, 0.2), (-0.15, 0.15), (-0.05, 0.05), (-0.4, -0.05)] {
        let x = vsds_shared::geometry::Vec2::new(y, z);
        let p = field.gp.predict(x);
        println!("{y:6.2} {z:6.2} {:6.3} {:7.3} {:6.3}", p.mean.phi, p.mean.kappa, p.variance);
    }
    Ok(())
}
