use serde::{Deserialize, Serialize};

use crate::geometry::{Force2, Point2, Vel2};

/// Position, velocity and clock of the master device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MasterState {
    pub x: Point2,
    pub v: Vel2,
    pub t: f64,
}

impl MasterState {
    pub fn at_rest(x: Point2) -> Self {
        Self { x, v: Vel2::ZERO, t: 0.0 }
    }
}

/// One semi-implicit Euler step of the point-mass master, `m ẍ = u_c + u_h`.
pub fn step_master(state: MasterState, u_c: Force2, u_h: Force2, mass: f64, dt: f64) -> MasterState {
    let v = state.v + (u_c + u_h) * (dt / mass);
    MasterState {
        x: state.x + v * dt,
        v,
        t: state.t + dt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;

    #[test]
    fn free_motion_is_uniform() {
        let s = MasterState { x: Vec2::new(0.1, 0.2), v: Vec2::new(0.5, -1.0), t: 0.0 };
        let n = step_master(s, Vec2::ZERO, Vec2::ZERO, 1.0, 0.01);
        assert_eq!(n.v, s.v);
        assert!((n.x.y - 0.105).abs() < 1e-15 && (n.x.z - 0.19).abs() < 1e-15);
    }

    #[test]
    fn unit_force_step() {
        let n = step_master(MasterState::at_rest(Vec2::ZERO), Vec2::new(1.0, 0.0), Vec2::ZERO, 1.0, 0.001);
        assert!((n.v.y - 0.001).abs() < 1e-18);
        assert!((n.x.y - 1e-6).abs() < 1e-21);
        assert_eq!(n.x.z, 0.0);
    }
}
