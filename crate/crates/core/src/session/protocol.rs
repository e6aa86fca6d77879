//! JSON text frames exchanged with a live client.
//!
//! Client → server: `{"type":"force","seq":n,"fy":..,"fz":..}` and
//! `{"type":"command","seq":n,"name":"start"}`. Server → client: `state`,
//! `field`, `event` and `error` frames. Every frame carries a sequence number
//! that increases by one per frame sent in each direction.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Force2, Point2, Vel2};
use crate::session::field::FieldDump;
use crate::session::machine::{EventKind, SessionEvent, TickReport};
use crate::session::ModeKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandName {
    Start,
    Stop,
    Reset,
    SetScenario,
    BeginDemo,
    EndDemo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Force {
        #[serde(default)]
        seq: u64,
        fy: f64,
        fz: f64,
    },
    Command {
        #[serde(default)]
        seq: u64,
        name: CommandName,
        /// Scenario name or file for `set_scenario`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scenario: Option<String>,
    },
}

impl ClientMessage {
    pub fn seq(&self) -> u64 {
        match self {
            ClientMessage::Force { seq, .. } | ClientMessage::Command { seq, .. } => *seq,
        }
    }

    pub fn force(&self) -> Option<Force2> {
        match self {
            ClientMessage::Force { fy, fz, .. } => Some(Force2::new(*fy, *fz)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    State {
        seq: u64,
        t: f64,
        x_m: Point2,
        v_m: Vel2,
        x_r: Point2,
        u_c: Force2,
        u_h: Force2,
        mode: ModeKind,
        omega_max: f64,
    },
    Field {
        seq: u64,
        #[serde(flatten)]
        dump: Box<FieldDump>,
    },
    Event {
        seq: u64,
        name: EventKind,
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<f64>,
    },
    Error {
        seq: u64,
        message: String,
    },
}

impl ServerMessage {
    pub fn seq(&self) -> u64 {
        match self {
            ServerMessage::State { seq, .. }
            | ServerMessage::Field { seq, .. }
            | ServerMessage::Event { seq, .. }
            | ServerMessage::Error { seq, .. } => *seq,
        }
    }
}

/// Hands out consecutive sequence numbers starting at 1.
#[derive(Debug, Clone, Default)]
pub struct Sequencer {
    last: u64,
}

impl Sequencer {
    pub fn next_seq(&mut self) -> u64 {
        self.last += 1;
        self.last
    }

    pub fn state(&mut self, r: &TickReport) -> ServerMessage {
        ServerMessage::State {
            seq: self.next_seq(),
            t: r.t,
            x_m: r.x_m,
            v_m: r.v_m,
            x_r: r.x_r,
            u_c: r.u_c,
            u_h: r.u_h,
            mode: r.mode,
            omega_max: r.omega_max,
        }
    }

    pub fn event(&mut self, e: &SessionEvent) -> ServerMessage {
        ServerMessage::Event {
            seq: self.next_seq(),
            name: e.kind,
            t: e.t,
            value: e.value,
        }
    }

    pub fn field(&mut self, dump: FieldDump) -> ServerMessage {
        ServerMessage::Field {
            seq: self.next_seq(),
            dump: Box::new(dump),
        }
    }

    pub fn error(&mut self, message: impl Into<String>) -> ServerMessage {
        ServerMessage::Error {
            seq: self.next_seq(),
            message: message.into(),
        }
    }
}

pub fn encode(msg: &ServerMessage) -> Result<String> {
    Ok(serde_json::to_string(msg)?)
}

pub fn decode(text: &str) -> Result<ClientMessage> {
    Ok(serde_json::from_str(text)?)
}
