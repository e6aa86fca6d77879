//! Shows the WebSocket frames a live client exchanges with a session.
//!
//! ```text
//! cargo run -p vsds-shared --example protocol_frames
//! ```

use vsds_shared::fixtures;
use vsds_shared::session::protocol::{decode, encode, ClientMessage, CommandName, Sequencer};
use vsds_shared::session::{export_field, GridSpec};

fn main() -> vsds_shared::Result<()> {
    let mut session = fixtures::nominal().session(None)?;
    let mut seq = Sequencer::default();
    let inbound = [
        r#"{"type":"command","seq":1,"name":"start"}"#,
        r#"{"type":"force","seq":2,"fy":1.5,"fz":-0.5}"#,
    ];
    let mut force = vsds_shared::geometry::Vec2::ZERO;
    for text in inbound {
        println!("<- {text}");
        match decode(text)? {
            ClientMessage::Command { name: CommandName::Start, .. } => {
                session.start_guidance()?;
                let grid: GridSpec = "-0.4:0:3,0:0.2:2".parse()?;
                let dump = export_field(session.field(), session.mode().guidance(), &grid)?;
                let frame = encode(&seq.field(dump))?;
                println!("-> {}...", &frame[..frame.len().min(160)]);
            }
            msg => force = msg.force().unwrap_or(force),
        }
    }
    let stride = session.config().telemetry_stride();
    for _ in 0..3 {
        let mut last = None;
        for _ in 0..stride {
            last = Some(session.tick(force));
        }
        println!("-> {}", encode(&seq.state(&last.unwrap()))?);
    }
    Ok(())
}
