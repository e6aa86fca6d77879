//! Teleoperation physics loop, environment, simulated humans and baselines.

pub mod controllers;
pub mod dynamics;
pub mod environment;
pub mod human;
pub mod mapping;
pub mod metrics;
pub mod trial;

pub use controllers::{
    flow_controller, openloop_impedance_controller, ControllerKind, OpenLoopReference,
};
pub use dynamics::{step_master, MasterState};
pub use environment::{check_collision, Environment};
pub use human::{human_force, Follower, HumanAgent, HumanPolicy, F_MAX};
pub use mapping::{map_master_to_remote, map_remote_to_master, WorkspaceMap};
pub use metrics::{mean_squared_jerk, JerkAccumulator, TrialMetrics};
pub use trial::{run_trial, LogRecord, TrialOutcome};
