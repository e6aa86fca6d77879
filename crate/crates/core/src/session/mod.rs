//! The live shared-control loop: guidance, escape, demonstration recording
//! and incremental learning, plus field export and the wire protocol.

pub mod field;
pub mod machine;
pub mod protocol;

use serde::{Deserialize, Serialize};

pub use field::{export_field, FieldDump, GridSpec};
pub use machine::{
    build_guidance, ControllerConfig, EventKind, Guidance, Session, SessionConfig, SessionEvent,
    SessionMode, TickReport, Transition,
};

/// Mode tag without payload, used in logs, frames and by scripted humans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Idle,
    Guided,
    Free,
    Recording,
    Learning,
}

impl ModeKind {
    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Idle => "idle",
            ModeKind::Guided => "guided",
            ModeKind::Free => "free",
            ModeKind::Recording => "recording",
            ModeKind::Learning => "learning",
        }
    }
}
