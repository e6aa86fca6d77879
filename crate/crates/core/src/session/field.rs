//! Grid dumps of the reshaped field and the guidance around it.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vec2};
use crate::motion::ReshapedDs;
use crate::session::machine::Guidance;
use crate::vsds::Tunnel;

/// Regular grid over the remote frame. Parsed from `y0:y1:ny,z0:z1:nz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.ny >= 1
            && self.nz >= 1
            && self.y_min <= self.y_max
            && self.z_min <= self.z_max
            && (self.ny > 1 || self.y_min == self.y_max)
            && (self.nz > 1 || self.z_min == self.z_max);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid grid: {self:?}")))
        }
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid points with y varying fastest.
    pub fn points(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(self.ny * self.nz);
        for iz in 0..self.nz {
            for iy in 0..self.ny {
                out.push(Vec2::new(
                    Self::axis(self.y_min, self.y_max, self.ny, iy),
                    Self::axis(self.z_min, self.z_max, self.nz, iz),
                ));
            }
        }
        out
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("grid spec '{s}' is not y0:y1:ny,z0:z1:nz"));
        let (ys, zs) = s.split_once(',').ok_or_else(bad)?;
        let axis = |a: &str| -> Result<(f64, f64, usize)> {
            let parts: Vec<&str> = a.trim().split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok((
                parts[0].parse().map_err(|_| bad())?,
                parts[1].parse().map_err(|_| bad())?,
                parts[2].parse().map_err(|_| bad())?,
            ))
        };
        let (y_min, y_max, ny) = axis(ys)?;
        let (z_min, z_max, nz) = axis(zs)?;
        let g = GridSpec { y_min, y_max, ny, z_min, z_max, nz };
        g.validate()?;
        Ok(g)
    }
}

/// Stiffness ellipse of one spring: semi-axes proportional to the stiffness
/// along and across the path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessEllipse {
    pub center: Point2,
    pub direction: Vec2,
    pub k_par: f64,
    pub k_perp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDump {
    pub grid: GridSpec,
    /// Reshaped field at each grid point (m/s).
    pub velocity: Vec<Vec2>,
    /// Unit streamline directions; zero where the field vanishes.
    pub direction: Vec<Vec2>,
    /// Spring part of the guidance force, remote-frame positions (N).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vsds_force: Vec<Vec2>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub omega_max: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tunnel: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attractors: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ellipses: Vec<StiffnessEllipse>,
}

/// Samples the field on `grid`; with guidance also the force field, the
/// peak kernel, the tunnel mask and the stiffness ellipses.
pub fn export_field(field: &ReshapedDs, guidance: Option<&Guidance>, grid: &GridSpec) -> Result<FieldDump> {
    grid.validate()?;
    let points = grid.points();
    let velocity: Vec<Vec2> = points.iter().map(|&p| field.eval(p)).collect();
    let direction = velocity.iter().map(|v| v.normalized().unwrap_or(Vec2::ZERO)).collect();
    let mut dump = FieldDump {
        grid: *grid,
        velocity,
        direction,
        vsds_force: Vec::new(),
        omega_max: Vec::new(),
        tunnel: Vec::new(),
        threshold: None,
        path: Vec::new(),
        attractors: Vec::new(),
        ellipses: Vec::new(),
    };
    if let Some(g) = guidance {
        let chain = &g.chain;
        dump.vsds_force = points.iter().map(|&p| chain.spring_force(p)).collect();
        dump.omega_max = points.iter().map(|&p| chain.peak_kernel(p)).collect();
        dump.tunnel = points
            .iter()
            .map(|&p| chain.tunnel_check(g.threshold, p) == Tunnel::Inside)
            .collect();
        dump.threshold = Some(g.threshold);
        dump.path = g.path.points().to_vec();
        dump.attractors = chain.attractors().to_vec();
        dump.ellipses = chain
            .attractors()
            .iter()
            .skip(1)
            .zip(chain.directions())
            .zip(chain.gains())
            .map(|((&center, &direction), &(k_par, k_perp))| StiffnessEllipse {
                center,
                direction,
                k_par,
                k_perp,
            })
            .collect();
    }
    Ok(dump)
}
