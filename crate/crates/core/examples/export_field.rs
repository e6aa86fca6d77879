//! Writes a field dump (velocities, forces, tunnel mask, stiffness ellipses)
//! as JSON for plotting.
//!
//! ```text
//! cargo run -p vsds-shared --example export_field -- field.json
//! ```

use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::learn_from_demos;
use vsds_shared::session::{build_guidance, export_field, GridSpec, SessionConfig};
use vsds_shared::sim::WorkspaceMap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "field.json".into());
    let field = learn_from_demos(&[fixtures::original_demo()], fixtures::linear_ds(), GpHyperParams::default())?;
    let g = build_guidance(&field, DEMO_START, &WorkspaceMap::identity(), &SessionConfig::default(), 0.0)?;
    let grid: GridSpec = "-0.55:0.05:61,-0.1:0.4:51".parse()?;
    let dump = export_field(&field, Some(&g), &grid)?;
    std::fs::write(&out, serde_json::to_string(&dump)?)?;
    let inside = dump.tunnel.iter().filter(|&&b| b).count();
    println!(
        "wrote {out}: {} grid points, {inside} inside the tunnel, {} ellipses",
        dump.velocity.len(),
        dump.ellipses.len()
    );
    Ok(())
}
