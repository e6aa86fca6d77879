//! WebSocket front end: one live session per connection, stepped in
//! telemetry-sized frames on a wall-clock timer.

use std::io::Write;
use std::time::Duration;

use anyhow::{bail, Result};
use futures_util::{SinkExt, StreamExt};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc;
use tokio_tungstenite::tungstenite::Message;

use vsds_shared::session::protocol::encode;
use vsds_shared::session::GridSpec;

use crate::live::{load_scenario, Live};

pub const DEFAULT_GRID: &str = "-0.6:0.1:26,-0.1:0.5:31";

pub fn serve(host: &str, port: u16, scenario: &str, grid: &str, speed: f64) -> Result<()> {
    if !(speed > 0.0 && speed.is_finite()) {
        bail!("speed must be positive");
    }
    let grid: GridSpec = grid.parse()?;
    grid.validate()?;
    // fail before listening if the scenario is unusable
    Live::new(load_scenario(scenario)?, grid)?;
    let scenario = scenario.to_string();
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = TcpListener::bind((host, port)).await?;
        println!("listening on ws://{}", listener.local_addr()?);
        std::io::stdout().flush()?;
        loop {
            let (stream, peer) = listener.accept().await?;
            let scenario = scenario.clone();
            tokio::spawn(async move {
                if let Err(e) = connection(stream, &scenario, grid, speed).await {
                    eprintln!("{peer}: {e:#}");
                }
            });
        }
    })
}

async fn connection(stream: TcpStream, scenario: &str, grid: GridSpec, speed: f64) -> Result<()> {
    let ws = tokio_tungstenite::accept_async(stream).await?;
    let (mut sink, mut source) = ws.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<String>();
    tokio::spawn(async move {
        while let Some(Ok(msg)) = source.next().await {
            match msg {
                Message::Text(t) => {
                    if tx.send(t.to_string()).is_err() {
                        break;
                    }
                }
                Message::Close(_) => break,
                _ => {}
            }
        }
    });

    let mut live = Live::new(load_scenario(scenario)?, grid)?;
    let first = live.field_frame();
    sink.send(Message::Text(encode(&first)?.into())).await?;
    let mut timer = tokio::time::interval(Duration::from_secs_f64(live.frame_period() / speed));
    timer.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
    loop {
        timer.tick().await;
        let mut out = Vec::new();
        loop {
            match rx.try_recv() {
                Ok(text) => out.extend(live.handle(&text)),
                Err(mpsc::error::TryRecvError::Empty) => break,
                Err(mpsc::error::TryRecvError::Disconnected) => return Ok(()),
            }
        }
        out.extend(live.frame());
        for m in &out {
            sink.send(Message::Text(encode(m)?.into())).await?;
        }
    }
}
