//! Builds the attractor chain for a start position and probes the guidance
//! force beside the path.
//!
//! ```text
//! cargo run -p vsds-shared --example vsds_chain
//! ```

use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::geometry::Vec2;
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::learn_from_demos;
use vsds_shared::session::{build_guidance, SessionConfig};
use vsds_shared::sim::WorkspaceMap;

fn main() -> vsds_shared::Result<()> {
    let field = learn_from_demos(&[fixtures::original_demo()], fixtures::linear_ds(), GpHyperParams::default())?;
    let cfg = SessionConfig::default();
    let g = build_guidance(&field, DEMO_START, &WorkspaceMap::identity(), &cfg, 0.0)?;
    let chain = &g.chain;
    println!("path {:.3} m, {} attractors, tunnel threshold {:.3}", g.path.arc_length(), chain.attractors().len(), g.threshold);
    println!("\n  i      y      z    k_par  k_perp  width");
    for (i, (a, (kp, kq))) in chain.attractors()[1..].iter().zip(chain.gains()).enumerate() {
        println!("{:3} {:6.3} {:6.3} {:7.1} {:7.1} {:6.4}", i + 1, a.y, a.z, kp, kq, chain.widths()[i]);
    }

    let s = 0.3 * g.path.arc_length();
    let (p, n) = (g.path.point_at(s), g.path.tangent_at(s).unwrap().perp());
    println!("\nat s = {s:.3} m, stepping off the path:");
    println!(" offset  |force|  along-normal  peak kernel");
    for off in [-0.03, -0.01, 0.0, 0.01, 0.03, 0.06] {
        let x = p + n * off;
        let f = chain.control_force(x, Vec2::ZERO, &cfg.controller.vsds.damping);
        println!("{off:7.3} {:8.2} {:13.2} {:12.4}", f.norm(), f.dot(n), chain.peak_kernel(x));
    }
    Ok(())
}
