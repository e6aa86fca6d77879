//! Regenerates the demonstration and scenario files under `fixtures/`.
//!
//! ```text
//! cargo run -p vsds-shared --example write_fixtures
//! ```

use vsds_shared::fixtures;

fn main() -> vsds_shared::Result<()> {
    let demos = fixtures::demo_dir();
    let scenarios = fixtures::scenario_dir();
    std::fs::create_dir_all(&demos).expect("create demo dir");
    std::fs::create_dir_all(&scenarios).expect("create scenario dir");

    fixtures::original_demo().save(demos.join("original.json"))?;
    fixtures::avoidance_demo().save(demos.join("avoidance.json"))?;
    for s in fixtures::all_scenarios() {
        let path = scenarios.join(format!("{}.json", s.name));
        s.save(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
