//! Tabulates how GP variance sets spring stiffness and tunnel width, then
//! compares guidance built near and far from the demonstration.
//!
//! ```text
//! cargo run -p vsds-shared --example authority_schedule
//! ```

use vsds_shared::authority::{stiffness_from_variance, tunnel_threshold_from_variance, StiffnessSchedule, TunnelSchedule};
use vsds_shared::fixtures::{self, DEMO_START, FAR_HIGH_START, FAR_LOW_START};
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::learn_from_demos;
use vsds_shared::session::{build_guidance, SessionConfig};
use vsds_shared::sim::WorkspaceMap;

fn main() -> vsds_shared::Result<()> {
    let (s, t) = (StiffnessSchedule::default(), TunnelSchedule::default());
    println!("variance  k_perp  threshold");
    for i in 0..=10 {
        let v = 0.1 * i as f64;
        println!("{v:8.2} {:7.1} {:10.3}", stiffness_from_variance(v, &s), tunnel_threshold_from_variance(v, &t));
    }

    let field = learn_from_demos(&[fixtures::original_demo()], fixtures::linear_ds(), GpHyperParams::default())?;
    let cfg = SessionConfig::default();
    println!("\nstart            mean var  threshold  k_perp range");
    for (name, x) in [("demo start", DEMO_START), ("far, low", FAR_LOW_START), ("far, high", FAR_HIGH_START)] {
        let g = build_guidance(&field, x, &WorkspaceMap::identity(), &cfg, 0.0)?;
        let ks: Vec<f64> = g.chain.gains().iter().map(|g| g.1).collect();
        let (lo, hi) = ks.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &k| (a.min(k), b.max(k)));
        println!("{name:16} {:8.3} {:10.3}  {lo:6.0}..{hi:6.0}", g.mean_variance, g.threshold);
    }
    Ok(())
}
