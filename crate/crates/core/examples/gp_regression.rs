//! Fits the modulation GP to a handful of points and shows how the mean
//! reverts to zero and the variance to the prior away from the data.
//!
//! ```text
//! cargo run -p vsds-shared --example gp_regression
//! ```

use vsds_shared::geometry::Vec2;
use vsds_shared::gp::{GpDataset, GpHyperParams, GpModel};
use vsds_shared::motion::ModulationParams;

fn main() -> vsds_shared::Result<()> {
    let inputs = vec![Vec2::new(-0.1, 0.0), Vec2::new(0.0, 0.0), Vec2::new(0.1, 0.0)];
    let outputs = vec![
        ModulationParams::new(0.5, 0.2)?,
        ModulationParams::new(0.8, 0.5)?,
        ModulationParams::new(0.3, -0.2)?,
    ];
    let model = GpModel::fit(GpDataset::new(inputs, outputs)?, GpHyperParams::default())?;

    println!("   y      z     phi    kappa   variance");
    for i in 0..=8 {
        let x = Vec2::new(-0.15 + 0.0375 * i as f64, 0.0);
        let p = model.predict(x);
        println!("{:6.3} {:6.3} {:6.3} {:7.3} {:9.5}", x.y, x.z, p.mean.phi, p.mean.kappa, p.variance);
    }
    for z in [0.02, 0.05, 0.1, 0.2] {
        let p = model.predict(Vec2::new(0.0, z));
        println!("off the data by {z:4.2} m: variance {:.5}", p.variance);
    }
    Ok(())
}
