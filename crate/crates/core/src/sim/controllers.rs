//! Baseline guidance controllers used for comparison with VSDS.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Force2, Mat2, Point2, Vel2};
use crate::motion::{integrate_reference_path, ReshapedDs};
use crate::sim::mapping::WorkspaceMap;

/// Which force source drives the master.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Vsds,
    Flow,
    #[serde(rename = "openloop")]
    OpenLoop,
    Free,
}

impl std::str::FromStr for ControllerKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vsds" => Ok(Self::Vsds),
            "flow" => Ok(Self::Flow),
            "openloop" => Ok(Self::OpenLoop),
            "free" => Ok(Self::Free),
            other => Err(format!("unknown controller '{other}'")),
        }
    }
}

impl ControllerKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Vsds => "vsds",
            Self::Flow => "flow",
            Self::OpenLoop => "openloop",
            Self::Free => "free",
        }
    }
}

/// Velocity-tracking flow controller, `u_c = D_f (v_d − ẋ_m)`.
pub fn flow_controller(v_d: Vel2, v_m: Vel2, gain: &Mat2) -> Force2 {
    *gain * (v_d - v_m)
}

/// Desired master velocity of the flow controller: the reshaped field at the
/// mapped remote position, mapped back to the master.
pub fn flow_desired_velocity(field: &ReshapedDs, map: &WorkspaceMap, x_m: Point2) -> Vel2 {
    map.velocity_to_master(field.eval(map.to_remote(x_m)))
}

/// Time-indexed master trajectory integrated open-loop from the reshaped field.
#[derive(Debug, Clone)]
pub struct OpenLoopReference {
    points: Vec<Point2>,
    dt: f64,
}

impl OpenLoopReference {
    /// Integrates the field from `start_r` with step `dt` and maps the result
    /// to the master.
    pub fn integrate(
        field: &ReshapedDs,
        map: &WorkspaceMap,
        start_r: Point2,
        dt: f64,
        goal_tol: f64,
        max_steps: usize,
    ) -> Result<Self> {
        let path = integrate_reference_path(field, start_r, dt, goal_tol, max_steps)?;
        Ok(Self {
            points: path.points().iter().map(|&p| map.to_master(p)).collect(),
            dt,
        })
    }

    pub fn from_points(points: Vec<Point2>, dt: f64) -> Self {
        assert!(!points.is_empty(), "open-loop reference needs at least one point");
        Self { points, dt }
    }

    /// Reference at time `t`, held at the final point once the clock passes
    /// its end.
    pub fn at(&self, t: f64) -> Point2 {
        let k = (t / self.dt).round().max(0.0) as usize;
        self.points[k.min(self.points.len() - 1)]
    }

    pub fn duration(&self) -> f64 {
        (self.points.len() - 1) as f64 * self.dt
    }
}

/// Impedance control against the clock-indexed reference,
/// `u_c = K_o (x_d(t) − x_m) − D_o ẋ_m`. The reference advances regardless of
/// where the master is.
pub fn openloop_impedance_controller(
    t: f64,
    x_m: Point2,
    v_m: Vel2,
    reference: &OpenLoopReference,
    stiffness: &Mat2,
    damping: &Mat2,
) -> Force2 {
    *stiffness * (reference.at(t) - x_m) - *damping * v_m
}
