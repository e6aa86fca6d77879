//! A live session driven by client frames, independent of the transport.

use std::path::Path;

use anyhow::{anyhow, Result};

use vsds_shared::fixtures;
use vsds_shared::geometry::Force2;
use vsds_shared::scenario::Scenario;
use vsds_shared::session::protocol::{decode, ClientMessage, CommandName, Sequencer, ServerMessage};
use vsds_shared::session::{export_field, GridSpec, Session};

/// Loads a fixture by name, or a scenario file.
pub fn load_scenario(name: &str) -> Result<Scenario> {
    if let Some(s) = fixtures::scenario_by_name(name) {
        return Ok(s);
    }
    if Path::new(name).is_file() {
        return Ok(Scenario::load(name)?);
    }
    Err(anyhow!("unknown scenario '{name}'"))
}

/// One client's session. The latest force frame is held until replaced.
pub struct Live {
    scenario: Scenario,
    session: Session,
    grid: GridSpec,
    seq: Sequencer,
    force: Force2,
    events_sent: usize,
    builds_seen: usize,
}

impl Live {
    pub fn new(scenario: Scenario, grid: GridSpec) -> Result<Self> {
        let session = scenario.session(None)?;
        Ok(Self {
            scenario,
            session,
            grid,
            seq: Sequencer::default(),
            force: Force2::ZERO,
            events_sent: 0,
            builds_seen: 0,
        })
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    /// Simulated seconds covered by one `frame`.
    pub fn frame_period(&self) -> f64 {
        self.session.config().telemetry_stride() as f64 * self.session.config().dt
    }

    /// The current field, with guidance when there is any.
    pub fn field_frame(&mut self) -> ServerMessage {
        match export_field(self.session.field(), self.session.mode().guidance(), &self.grid) {
            Ok(dump) => self.seq.field(dump),
            Err(e) => self.seq.error(e.to_string()),
        }
    }

    /// Applies one client text frame.
    pub fn handle(&mut self, text: &str) -> Vec<ServerMessage> {
        let msg = match decode(text) {
            Ok(m) => m,
            Err(e) => return vec![self.seq.error(format!("bad frame: {e}"))],
        };
        let mut out = Vec::new();
        match msg {
            ClientMessage::Force { fy, fz, .. } => {
                if fy.is_finite() && fz.is_finite() {
                    self.force = Force2::new(fy, fz);
                } else {
                    out.push(self.seq.error("force must be finite"));
                }
            }
            ClientMessage::Command { name, scenario, .. } => match name {
                CommandName::Start => {
                    if let Err(e) = self.session.start_guidance() {
                        out.push(self.seq.error(e.to_string()));
                    }
                }
                CommandName::Stop => self.session.stop(),
                CommandName::Reset => {
                    self.session.reset(self.scenario.start);
                    self.force = Force2::ZERO;
                }
                CommandName::BeginDemo => self.session.begin_demo(),
                CommandName::EndDemo => self.session.end_demo(),
                CommandName::SetScenario => {
                    match scenario.ok_or_else(|| anyhow!("set_scenario needs a scenario")).and_then(|n| load_scenario(&n)) {
                        Ok(s) => match s.session(None) {
                            Ok(session) => {
                                self.scenario = s;
                                self.session = session;
                                self.force = Force2::ZERO;
                                self.events_sent = 0;
                                self.builds_seen = 0;
                                out.push(self.field_frame());
                            }
                            Err(e) => out.push(self.seq.error(e.to_string())),
                        },
                        Err(e) => out.push(self.seq.error(e.to_string())),
                    }
                }
            },
        }
        out.extend(self.pending());
        out
    }

    /// Advances one telemetry period under the held force.
    pub fn frame(&mut self) -> Vec<ServerMessage> {
        let stride = self.session.config().telemetry_stride();
        let mut last = None;
        for _ in 0..stride {
            last = Some(self.session.tick(self.force));
        }
        let mut out = Vec::new();
        if let Some(r) = last {
            out.push(self.seq.state(&r));
        }
        out.extend(self.pending());
        out
    }

    /// Events not yet sent, then a field frame if guidance was rebuilt.
    fn pending(&mut self) -> Vec<ServerMessage> {
        let mut out: Vec<ServerMessage> = Vec::new();
        let events = self.session.events()[self.events_sent..].to_vec();
        self.events_sent += events.len();
        for e in &events {
            out.push(self.seq.event(e));
        }
        let builds = self.session.guidance_builds().len();
        if builds != self.builds_seen {
            self.builds_seen = builds;
            out.push(self.field_frame());
        }
        out
    }
}
