//! Replays the scripted escape scenario: guidance, an escape past the
//! obstacle, a recorded detour and the relearned guidance.
//!
//! ```text
//! cargo run --release -p vsds-shared --example session_replay
//! ```

use vsds_shared::fixtures;
use vsds_shared::scenario::HumanKind;
use vsds_shared::sim::{run_trial, ControllerKind};

fn main() -> vsds_shared::Result<()> {
    let s = fixtures::case2();
    let before = s.field()?.gp.len();
    let out = run_trial(&s, ControllerKind::Vsds, HumanKind::Escaper)?;

    for t in &out.transitions {
        println!("{:7.3} s  {} -> {}", t.t, t.from.name(), t.to.name());
    }
    for e in &out.events {
        let value = e.value.map(|v| format!(" ({v:.2})")).unwrap_or_default();
        println!("{:7.3} s  {:?}{value}", e.t, e.kind);
    }
    for u in out.session.updates() {
        println!("update: {} removed, {} added", u.removed.len(), u.added.len());
    }
    println!(
        "model {before} -> {} points, success {}, collision {}",
        out.session.field().gp.len(),
        out.metrics.success,
        out.metrics.collision
    );
    Ok(())
}
