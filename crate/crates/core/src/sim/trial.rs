//! The fixed-step experiment loop.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Force2, Point2, Vel2};
use crate::scenario::{HumanKind, Scenario};
use crate::session::{EventKind, ModeKind, Session, SessionEvent, TickReport, Transition};
use crate::sim::controllers::ControllerKind;
use crate::sim::metrics::{JerkAccumulator, TrialMetrics};

/// One telemetry line of a trial log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub t: f64,
    pub x_m: Point2,
    pub v_m: Vel2,
    pub x_r: Point2,
    pub u_c: Force2,
    pub u_h: Force2,
    pub omega_max: f64,
    pub mode: ModeKind,
}

impl From<&TickReport> for LogRecord {
    fn from(r: &TickReport) -> Self {
        Self {
            t: r.t,
            x_m: r.x_m,
            v_m: r.v_m,
            x_r: r.x_r,
            u_c: r.u_c,
            u_h: r.u_h,
            omega_max: r.omega_max,
            mode: r.mode,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub metrics: TrialMetrics,
    /// Telemetry-rate records, followed by one record of the final state.
    pub log: Vec<LogRecord>,
    pub events: Vec<SessionEvent>,
    pub transitions: Vec<Transition>,
    /// The session as it stood when the trial ended, learned model included.
    pub session: Session,
}

impl TrialOutcome {
    /// The log as JSON lines.
    pub fn log_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.log {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn write_log(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.log_jsonl()?.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

/// Runs `scenario` with the given controller and scripted human until the
/// goal is reached, a collision occurs or `t_max` elapses. A timeout is a
/// failed trial, not an error.
pub fn run_trial(scenario: &Scenario, controller: ControllerKind, human: HumanKind) -> Result<TrialOutcome> {
    scenario.validate()?;
    let field = scenario.field()?;
    let map = scenario.map()?;
    let cfg = scenario.session_config(Some(controller));
    let mut agent = scenario.human_agent(human, &field)?;
    let mut session = scenario.session_with_field(field, Some(controller))?;
    session.start_guidance()?;

    let steps = (scenario.t_max / cfg.dt).round() as u64;
    let mut jerk = JerkAccumulator::new(cfg.dt);
    jerk.push(session.remote_position());
    let mut log = Vec::new();
    let mut peak_control: f64 = 0.0;
    let mut last: Option<TickReport> = None;

    for _ in 0..steps {
        if session.goal_reached() || session.collided() {
            break;
        }
        let u_h = agent.force(session.master(), session.mode_kind(), &map);
        let r = session.tick(u_h);
        peak_control = peak_control.max(r.u_c.norm());
        if r.telemetry {
            log.push(LogRecord::from(&r));
        }
        jerk.push(session.remote_position());
        last = Some(r);
    }

    let m = *session.master();
    log.push(LogRecord {
        t: m.t,
        x_m: m.x,
        v_m: m.v,
        x_r: session.remote_position(),
        u_c: last.as_ref().map_or(Force2::ZERO, |r| r.u_c),
        u_h: last.as_ref().map_or(Force2::ZERO, |r| r.u_h),
        omega_max: last.as_ref().map_or(0.0, |r| r.omega_max),
        mode: session.mode_kind(),
    });

    let events = session.events().to_vec();
    let count = |k: EventKind| events.iter().filter(|e| e.kind == k).count();
    let metrics = TrialMetrics {
        success: session.goal_reached() && !session.collided(),
        goal_reached: session.goal_reached(),
        collision: session.collided(),
        execution_time: m.t,
        mean_squared_jerk: jerk.mean(),
        peak_escape_force: events.iter().find(|e| e.kind == EventKind::Escaped).and_then(|e| e.value),
        peak_control_force: peak_control,
        escapes: count(EventKind::Escaped),
        learned: count(EventKind::Learned),
    };
    Ok(TrialOutcome {
        metrics,
        log,
        transitions: session.transitions().to_vec(),
        events,
        session,
    })
}
