use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::authority::{
    build_stiffness_profile, mean_path_variance, tunnel_threshold_from_variance, StiffnessSchedule,
    TunnelSchedule,
};
use crate::error::{Error, Result};
use crate::geometry::{Force2, Mat2, Point2, Vel2};
use crate::gp::{incremental_update, IncrementalConfig, UpdateReport};
use crate::motion::{
    integrate_reference_path, ReferencePath, ReshapedDs, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS,
};
use crate::session::ModeKind;
use crate::sim::controllers::{
    flow_controller, openloop_impedance_controller, ControllerKind, OpenLoopReference,
};
use crate::sim::dynamics::{step_master, MasterState};
use crate::sim::environment::Environment;
use crate::sim::mapping::WorkspaceMap;
use crate::vsds::{attractor_directions, sample_attractors, AttractorChain, Tunnel, VsdsParams};

/// Which controller drives the master and with which gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControllerConfig {
    pub kind: ControllerKind,
    pub vsds: VsdsParams,
    /// `D_f` of the flow controller.
    pub flow_gain: Mat2,
    /// `K_o` of the open-loop impedance controller.
    pub openloop_stiffness: Mat2,
    /// `D_o` of the open-loop impedance controller.
    pub openloop_damping: Mat2,
    /// Release guidance when the operator leaves the tunnel (VSDS only).
    pub tunnel_enabled: bool,
    /// Record and learn after an escape (VSDS only).
    pub learning_enabled: bool,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            kind: ControllerKind::Vsds,
            vsds: VsdsParams::default(),
            flow_gain: Mat2::diag(45.0, 20.0),
            openloop_stiffness: Mat2::diag(250.0, 1800.0),
            openloop_damping: Mat2::scalar(25.0),
            tunnel_enabled: true,
            learning_enabled: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub controller: ControllerConfig,
    pub stiffness_schedule: StiffnessSchedule,
    pub tunnel_schedule: TunnelSchedule,
    pub incremental: IncrementalConfig,
    /// Master mass (kg).
    pub mass: f64,
    /// Physics step (s).
    pub dt: f64,
    /// Rate of telemetry and demonstration samples (Hz).
    pub telemetry_hz: f64,
    /// Remote-frame distance from the escape point that starts a recording (m).
    pub record_threshold: f64,
    /// Length of the window over which the escape force is measured (s).
    pub escape_window: f64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            controller: ControllerConfig::default(),
            stiffness_schedule: StiffnessSchedule::default(),
            tunnel_schedule: TunnelSchedule::default(),
            incremental: IncrementalConfig::default(),
            mass: 1.0,
            dt: 1e-3,
            telemetry_hz: 60.0,
            record_threshold: 0.02,
            escape_window: 1.0,
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        self.controller.vsds.validate()?;
        self.stiffness_schedule.validate()?;
        self.tunnel_schedule.validate()?;
        let c = &self.controller;
        let psd = |m: &Mat2| m.is_symmetric(1e-12) && m.symmetric_eigenvalues().0 >= 0.0;
        let ok = self.mass > 0.0
            && self.dt > 0.0
            && self.telemetry_hz > 0.0
            && self.record_threshold > 0.0
            && self.escape_window > 0.0
            && psd(&c.flow_gain)
            && psd(&c.openloop_stiffness)
            && psd(&c.openloop_damping)
            && self.incremental.r_th >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid session configuration: {self:?}")))
        }
    }

    /// Physics ticks per telemetry sample, `round(1 / (rate · dt))`.
    pub fn telemetry_stride(&self) -> u64 {
        ((1.0 / (self.telemetry_hz * self.dt)).round() as u64).max(1)
    }
}

/// Everything built when guidance (re)starts from a position.
#[derive(Debug, Clone)]
pub struct Guidance {
    /// Remote frame.
    pub path: ReferencePath,
    /// Remote frame.
    pub chain: AttractorChain,
    /// The same chain on the master, where the control force is computed.
    pub master_chain: AttractorChain,
    pub threshold: f64,
    pub mean_variance: f64,
    /// Session time at which the guidance was built.
    pub built_at: f64,
    pub openloop: Option<OpenLoopReference>,
}

/// Reference path, attractors, stiffness profile and tunnel threshold for a
/// start position `x_r` in the remote frame.
pub fn build_guidance(
    field: &ReshapedDs,
    x_r: Point2,
    map: &WorkspaceMap,
    cfg: &SessionConfig,
    t: f64,
) -> Result<Guidance> {
    let path = integrate_reference_path(field, x_r, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS)?;
    let params = &cfg.controller.vsds;
    let attractors = match sample_attractors(&path, params.spacing) {
        Ok(a) => a,
        Err(Error::PathTooShort { .. }) => vec![path.start(), path.goal()],
        Err(e) => return Err(e),
    };
    let springs: Vec<Point2> = if attractors.len() == 1 {
        attractors.clone()
    } else {
        attractors[1..].to_vec()
    };
    let directions = attractor_directions(field, &attractors);
    let gains = build_stiffness_profile(&springs, &field.gp, &cfg.stiffness_schedule);
    let mean_variance = mean_path_variance(&springs, &field.gp);
    let threshold = tunnel_threshold_from_variance(mean_variance, &cfg.tunnel_schedule);
    let chain = AttractorChain::new(attractors, directions, gains, params)?;
    let master_chain = chain.mapped(map.beta, map.remote_origin, map.master_origin);
    let openloop = if cfg.controller.kind == ControllerKind::OpenLoop {
        Some(OpenLoopReference::integrate(field, map, x_r, cfg.dt, PATH_GOAL_TOL, PATH_MAX_STEPS)?)
    } else {
        None
    };
    Ok(Guidance {
        path,
        chain,
        master_chain,
        threshold,
        mean_variance,
        built_at: t,
        openloop,
    })
}

#[derive(Debug, Clone)]
pub enum SessionMode {
    Idle,
    Guided(Box<Guidance>),
    /// Gravity compensation after an escape.
    Free {
        /// Remote frame.
        escape_point: Point2,
        last: Option<Box<Guidance>>,
    },
    /// Remote-frame position and velocity samples of a new demonstration.
    Recording {
        samples: Vec<(Point2, Vel2)>,
        last: Option<Box<Guidance>>,
    },
    Learning,
}

impl SessionMode {
    pub fn kind(&self) -> ModeKind {
        match self {
            SessionMode::Idle => ModeKind::Idle,
            SessionMode::Guided(_) => ModeKind::Guided,
            SessionMode::Free { .. } => ModeKind::Free,
            SessionMode::Recording { .. } => ModeKind::Recording,
            SessionMode::Learning => ModeKind::Learning,
        }
    }

    /// The active guidance, or the one that was active before an escape.
    pub fn guidance(&self) -> Option<&Guidance> {
        match self {
            SessionMode::Guided(g) => Some(g),
            SessionMode::Free { last, .. } | SessionMode::Recording { last, .. } => last.as_deref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Escaped,
    Recording,
    Learned,
    Goal,
    Collision,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Escaped => "escaped",
            EventKind::Recording => "recording",
            EventKind::Learned => "learned",
            EventKind::Goal => "goal",
            EventKind::Collision => "collision",
        }
    }
}

/// `value` is the escape force for `escaped` and the number of inserted
/// samples for `learned`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionEvent {
    pub t: f64,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub t: f64,
    pub from: ModeKind,
    pub to: ModeKind,
}

/// What happened during one tick. Positions and forces are those the step
/// started from and applied.
#[derive(Debug, Clone, PartialEq)]
pub struct TickReport {
    pub t: f64,
    pub x_m: Point2,
    pub v_m: Vel2,
    pub x_r: Point2,
    pub u_c: Force2,
    pub u_h: Force2,
    /// Mode in which `u_c` was computed.
    pub mode: ModeKind,
    /// Peak kernel value of the current or last chain at `x_m`.
    pub omega_max: f64,
    /// True on ticks that fall on the telemetry rate.
    pub telemetry: bool,
    pub events: Vec<SessionEvent>,
}

/// One shared-control session over a fixed environment and workspace map.
#[derive(Debug, Clone)]
pub struct Session {
    config: SessionConfig,
    field: ReshapedDs,
    env: Environment,
    map: WorkspaceMap,
    master: MasterState,
    mode: SessionMode,
    ticks: u64,
    events: Vec<SessionEvent>,
    transitions: Vec<Transition>,
    force_window: VecDeque<(f64, f64)>,
    builds: Vec<f64>,
    goal_reached: bool,
    collided: bool,
    updates: Vec<UpdateReport>,
    last_error: Option<String>,
}

impl Session {
    /// A session in idle mode with the master at rest over `start_r`.
    pub fn new(
        field: ReshapedDs,
        env: Environment,
        map: WorkspaceMap,
        config: SessionConfig,
        start_r: Point2,
    ) -> Result<Self> {
        config.validate()?;
        env.validate()?;
        Ok(Self {
            config,
            field,
            env,
            map,
            master: MasterState::at_rest(map.to_master(start_r)),
            mode: SessionMode::Idle,
            ticks: 0,
            events: Vec::new(),
            transitions: Vec::new(),
            force_window: VecDeque::new(),
            builds: Vec::new(),
            goal_reached: false,
            collided: false,
            updates: Vec::new(),
            last_error: None,
        })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn field(&self) -> &ReshapedDs {
        &self.field
    }

    pub fn environment(&self) -> &Environment {
        &self.env
    }

    pub fn map(&self) -> &WorkspaceMap {
        &self.map
    }

    pub fn master(&self) -> &MasterState {
        &self.master
    }

    pub fn mode(&self) -> &SessionMode {
        &self.mode
    }

    pub fn mode_kind(&self) -> ModeKind {
        self.mode.kind()
    }

    pub fn remote_position(&self) -> Point2 {
        self.map.to_remote(self.master.x)
    }

    pub fn events(&self) -> &[SessionEvent] {
        &self.events
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Session times at which guidance was built, in order.
    pub fn guidance_builds(&self) -> &[f64] {
        &self.builds
    }

    pub fn updates(&self) -> &[UpdateReport] {
        &self.updates
    }

    pub fn goal_reached(&self) -> bool {
        self.goal_reached
    }

    pub fn collided(&self) -> bool {
        self.collided
    }

    pub fn last_error(&self) -> Option<&str> {
        self.last_error.as_deref()
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    /// Replaces the mode and logs the transition from `from`, the kind of
    /// the mode that was moved out.
    fn switch(&mut self, from: ModeKind, mode: SessionMode) {
        let to = mode.kind();
        if from != to {
            self.transitions.push(Transition { t: self.master.t, from, to });
        }
        self.mode = mode;
    }

    fn set_mode(&mut self, mode: SessionMode) {
        let from = self.mode.kind();
        self.switch(from, mode);
    }

    fn take_mode(&mut self) -> (ModeKind, SessionMode) {
        (self.mode.kind(), std::mem::replace(&mut self.mode, SessionMode::Idle))
    }

    fn emit(&mut self, kind: EventKind, value: Option<f64>) {
        self.events.push(SessionEvent { t: self.master.t, kind, value });
    }

    fn check_goal(&mut self) {
        if !self.goal_reached && self.env.at_goal(self.remote_position()) {
            self.goal_reached = true;
            self.emit(EventKind::Goal, None);
        }
    }

    /// Builds guidance from the current position and enters guided mode.
    /// With the free controller the session goes straight to free mode.
    pub fn start_guidance(&mut self) -> Result<()> {
        let x_r = self.remote_position();
        if self.config.controller.kind == ControllerKind::Free {
            self.set_mode(SessionMode::Free { escape_point: x_r, last: None });
        } else {
            let g = build_guidance(&self.field, x_r, &self.map, &self.config, self.master.t)?;
            self.builds.push(self.master.t);
            self.set_mode(SessionMode::Guided(Box::new(g)));
        }
        self.check_goal();
        Ok(())
    }

    /// Puts the master back at rest over `start_r` in idle mode. A recording
    /// in progress is discarded; the learned model is kept.
    pub fn reset(&mut self, start_r: Point2) {
        self.set_mode(SessionMode::Idle);
        self.master = MasterState {
            x: self.map.to_master(start_r),
            v: Vel2::ZERO,
            t: self.master.t,
        };
        self.force_window.clear();
        self.goal_reached = false;
        self.collided = false;
    }

    /// Ends a recording and learns from it; otherwise drops to idle.
    pub fn stop(&mut self) {
        if self.mode.kind() == ModeKind::Recording {
            self.finish_recording();
        } else {
            self.set_mode(SessionMode::Idle);
        }
    }

    /// Starts recording right away when free.
    pub fn begin_demo(&mut self) {
        if self.mode.kind() == ModeKind::Free {
            let (from, old) = self.take_mode();
            let SessionMode::Free { last, .. } = old else { unreachable!() };
            self.switch(from, SessionMode::Recording { samples: Vec::new(), last });
            self.emit(EventKind::Recording, None);
        }
    }

    /// Ends a recording in progress and learns from it.
    pub fn end_demo(&mut self) {
        if self.mode.kind() == ModeKind::Recording {
            self.finish_recording();
        }
    }

    /// Recording → learning → guided from the current position.
    fn finish_recording(&mut self) {
        let (from, old) = self.take_mode();
        let SessionMode::Recording { samples, .. } = old else {
            self.mode = old;
            return;
        };
        self.switch(from, SessionMode::Learning);
        if !samples.is_empty() {
            match incremental_update(&self.field.gp, &samples, &self.field.base, &self.config.incremental) {
                Ok((gp, report)) => {
                    self.field.gp = gp;
                    let added = report.added.len() as f64;
                    self.updates.push(report);
                    self.emit(EventKind::Learned, Some(added));
                }
                Err(e) => self.last_error = Some(e.to_string()),
            }
        }
        if let Err(e) = self.start_guidance() {
            self.last_error = Some(e.to_string());
            self.set_mode(SessionMode::Idle);
        }
    }

    /// Peak human force over the escape window.
    fn escape_force(&self) -> f64 {
        self.force_window.iter().map(|&(_, f)| f).fold(0.0, f64::max)
    }

    /// Position-driven mode changes at the start of a tick (VSDS only).
    fn update_mode(&mut self, x_m: Point2, x_r: Point2) {
        let c = self.config.controller;
        if c.kind != ControllerKind::Vsds {
            return;
        }
        match &self.mode {
            SessionMode::Guided(g) => {
                if c.tunnel_enabled && g.master_chain.tunnel_check(g.threshold, x_m) == Tunnel::Outside {
                    let peak = self.escape_force();
                    let (from, old) = self.take_mode();
                    let SessionMode::Guided(g) = old else { unreachable!() };
                    self.switch(from, SessionMode::Free { escape_point: x_r, last: Some(g) });
                    self.emit(EventKind::Escaped, Some(peak));
                }
            }
            SessionMode::Free { escape_point, last } => {
                let moved = x_r.distance(*escape_point) > self.config.record_threshold;
                let back = last
                    .as_ref()
                    .is_some_and(|g| g.master_chain.tunnel_check(g.threshold, x_m) == Tunnel::Inside);
                if c.learning_enabled && moved {
                    let (from, old) = self.take_mode();
                    let SessionMode::Free { last, .. } = old else { unreachable!() };
                    self.switch(from, SessionMode::Recording { samples: Vec::new(), last });
                    self.emit(EventKind::Recording, None);
                } else if back {
                    let (from, old) = self.take_mode();
                    let SessionMode::Free { last: Some(g), .. } = old else { unreachable!() };
                    self.switch(from, SessionMode::Guided(g));
                }
            }
            _ => {}
        }
    }

    /// Guidance force for the current mode, and the peak kernel at `x_m`.
    fn control_force(&self) -> (Force2, f64) {
        let s = &self.master;
        let c = &self.config.controller;
        let omega = self
            .mode
            .guidance()
            .map_or(0.0, |g| g.master_chain.peak_kernel(s.x));
        let SessionMode::Guided(g) = &self.mode else {
            return (Force2::ZERO, omega);
        };
        let u_c = match c.kind {
            ControllerKind::Vsds => g.master_chain.control_force(s.x, s.v, &c.vsds.damping),
            ControllerKind::Flow => {
                let v_d = self.map.velocity_to_master(self.field.eval(self.map.to_remote(s.x)));
                flow_controller(v_d, s.v, &c.flow_gain)
            }
            ControllerKind::OpenLoop => match &g.openloop {
                Some(r) => openloop_impedance_controller(
                    s.t - g.built_at,
                    s.x,
                    s.v,
                    r,
                    &c.openloop_stiffness,
                    &c.openloop_damping,
                ),
                None => Force2::ZERO,
            },
            ControllerKind::Free => Force2::ZERO,
        };
        (u_c, omega)
    }

    /// Advances the session by one physics step under the human force `u_h`.
    pub fn tick(&mut self, u_h: Force2) -> TickReport {
        let start = self.master;
        let first_event = self.events.len();
        let telemetry = self.ticks.is_multiple_of(self.config.telemetry_stride());

        self.force_window.push_back((start.t, u_h.norm()));
        while self
            .force_window
            .front()
            .is_some_and(|&(t, _)| t < start.t - self.config.escape_window)
        {
            self.force_window.pop_front();
        }

        let x_r = self.map.to_remote(start.x);
        self.update_mode(start.x, x_r);
        let (u_c, omega_max) = self.control_force();
        let mode = self.mode.kind();

        self.master = step_master(start, u_c, u_h, self.config.mass, self.config.dt);
        self.ticks += 1;
        let x_r_new = self.remote_position();

        if !self.collided && self.env.check_collision(x_r, x_r_new) {
            self.collided = true;
            self.emit(EventKind::Collision, None);
        }
        let at_goal = self.env.at_goal(x_r_new);
        if let SessionMode::Recording { samples, .. } = &mut self.mode {
            if telemetry {
                samples.push((x_r_new, self.map.velocity_to_remote(self.master.v)));
            }
            if at_goal {
                self.finish_recording();
            }
        }
        self.check_goal();

        TickReport {
            t: start.t,
            x_m: start.x,
            v_m: start.v,
            x_r,
            u_c,
            u_h,
            mode,
            omega_max,
            telemetry,
            events: self.events[first_event..].to_vec(),
        }
    }
}
