//! Measures the guidance tunnel: how far from the path the peak kernel stays
//! above the threshold, for the stiff-and-wide and soft-and-narrow settings.
//!
//! ```text
//! cargo run -p vsds-shared --example tunnel_geometry
//! ```

use vsds_shared::fixtures::{self, DEMO_START};
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::learn_from_demos;
use vsds_shared::session::{build_guidance, SessionConfig};
use vsds_shared::sim::WorkspaceMap;
use vsds_shared::vsds::{AttractorChain, Tunnel};

/// Distance along `n` from `p` at which the tunnel ends, by bisection.
fn half_width(chain: &AttractorChain, threshold: f64, p: vsds_shared::geometry::Point2, n: vsds_shared::geometry::Vec2) -> f64 {
    let inside = |d: f64| chain.tunnel_check(threshold, p + n * d) == Tunnel::Inside;
    let mut hi = 1e-4;
    while inside(hi) && hi < 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn main() -> vsds_shared::Result<()> {
    let field = learn_from_demos(&[fixtures::original_demo()], fixtures::linear_ds(), GpHyperParams::default())?;
    let g = build_guidance(&field, DEMO_START, &WorkspaceMap::identity(), &SessionConfig::default(), 0.0)?;
    println!("arc s   half-width @0.1  half-width @0.8");
    let len = g.path.arc_length();
    for i in 1..10 {
        let s = len * i as f64 / 10.0;
        let (p, n) = (g.path.point_at(s), g.path.tangent_at(s).unwrap().perp());
        let w = |th| 0.5 * (half_width(&g.chain, th, p, n) + half_width(&g.chain, th, p, -n));
        println!("{s:5.3} {:16.4} {:16.4}", w(0.1), w(0.8));
    }
    Ok(())
}
