use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vel2};

/// Similarity map between the remote task frame and the master device frame:
/// `x_m = β (x_r − x_0r) + x_0m`, `ẋ_m = β ẋ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceMap {
    pub beta: f64,
    pub master_origin: Point2,
    pub remote_origin: Point2,
}

impl WorkspaceMap {
    pub fn new(beta: f64, master_origin: Point2, remote_origin: Point2) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("workspace scale must be positive, got {beta}")));
        }
        Ok(Self {
            beta,
            master_origin,
            remote_origin,
        })
    }

    pub fn identity() -> Self {
        Self {
            beta: 1.0,
            master_origin: Point2::ZERO,
            remote_origin: Point2::ZERO,
        }
    }

    pub fn to_master(&self, x_r: Point2) -> Point2 {
        (x_r - self.remote_origin) * self.beta + self.master_origin
    }

    pub fn to_remote(&self, x_m: Point2) -> Point2 {
        (x_m - self.master_origin) * (1.0 / self.beta) + self.remote_origin
    }

    pub fn velocity_to_master(&self, v_r: Vel2) -> Vel2 {
        v_r * self.beta
    }

    pub fn velocity_to_remote(&self, v_m: Vel2) -> Vel2 {
        v_m * (1.0 / self.beta)
    }
}

pub fn map_remote_to_master(w: &WorkspaceMap, x_r: Point2) -> Point2 {
    w.to_master(x_r)
}

pub fn map_master_to_remote(w: &WorkspaceMap, x_m: Point2) -> Point2 {
    w.to_remote(x_m)
}
