//! Runs one scripted trial and prints its metrics and a few log lines.
//!
//! ```text
//! cargo run -p vsds-shared --example teleop_trial -- [scenario] [controller] [human]
//! ```

use vsds_shared::fixtures;
use vsds_shared::scenario::HumanKind;
use vsds_shared::sim::{run_trial, ControllerKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map(String::as_str).unwrap_or("nominal");
    let s = fixtures::scenario_by_name(name).ok_or(format!("no fixture '{name}'"))?;
    let controller: ControllerKind = args.get(1).map(|c| c.parse()).transpose()?.unwrap_or(s.session.controller.kind);
    let human: HumanKind = args.get(2).map(|h| h.parse()).transpose()?.unwrap_or(s.human.kind);

    let out = run_trial(&s, controller, human)?;
    println!("{name} / {} / {}", controller.name(), human.name());
    println!("{}", serde_json::to_string_pretty(&out.metrics)?);
    let step = (out.log.len() / 8).max(1);
    println!("\n    t      x_r.y   x_r.z   |u_c|   mode");
    for r in out.log.iter().step_by(step) {
        println!("{:6.3} {:8.4} {:7.4} {:7.2}   {}", r.t, r.x_r.y, r.x_r.z, r.u_c.norm(), r.mode.name());
    }
    Ok(())
}
