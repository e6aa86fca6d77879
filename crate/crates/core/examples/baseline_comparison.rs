//! Runs every fixture scenario under the four controllers and prints a table.
//!
//! ```text
//! cargo run --release -p vsds-shared --example baseline_comparison
//! ```

use vsds_shared::fixtures;
use vsds_shared::sim::{run_trial, ControllerKind};

fn main() -> vsds_shared::Result<()> {
    println!("{:10} {:9} {:9} {:>7} {:>9} {:>10} {:>8}", "scenario", "controller", "human", "ok", "time s", "jerk", "peak u_c");
    for s in fixtures::all_scenarios() {
        for c in [ControllerKind::Vsds, ControllerKind::Flow, ControllerKind::OpenLoop, ControllerKind::Free] {
            let m = run_trial(&s, c, s.human.kind)?.metrics;
            println!(
                "{:10} {:9} {:9} {:>7} {:9.2} {:10.2e} {:8.2}",
                s.name,
                c.name(),
                s.human.kind.name(),
                m.success,
                m.execution_time,
                m.mean_squared_jerk,
                m.peak_control_force
            );
        }
    }
    Ok(())
}
