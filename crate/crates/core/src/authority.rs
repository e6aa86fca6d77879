//! Variance-based authority allocation.
//!
//! Low predictive variance (close to demonstrations) means stiff guidance
//! across the path and a wide tunnel; high variance means soft guidance and a
//! narrow tunnel that is easy to leave. Both maps blend between their limits
//! with half a sine period.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::gp::GpModel;

/// Stiffness along the path and the variance-driven perpendicular stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessSchedule {
    /// Stiffness along the direction of motion (N/m).
    pub k_par: f64,
    pub a1: f64,
    pub a2: f64,
    pub sigma_l2: f64,
    pub sigma_u2: f64,
}

impl Default for StiffnessSchedule {
    fn default() -> Self {
        Self {
            k_par: 250.0,
            a1: 1100.0,
            a2: 700.0,
            sigma_l2: 0.0,
            sigma_u2: 0.85,
        }
    }
}

impl StiffnessSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.k_par > 0.0 && self.a1 > self.a2 && self.a2 > 0.0 && self.sigma_l2 < self.sigma_u2 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid stiffness schedule: {self:?}")))
        }
    }
}

/// Tunnel threshold limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelSchedule {
    pub b1: f64,
    pub b2: f64,
    pub sigma_l2: f64,
    pub sigma_u2: f64,
}

impl Default for TunnelSchedule {
    fn default() -> Self {
        Self {
            b1: 0.45,
            b2: 0.35,
            sigma_l2: 0.0,
            sigma_u2: 0.85,
        }
    }
}

impl TunnelSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.b1 - self.b2 > 0.0 && self.b1 + self.b2 < 1.0 && self.b2 >= 0.0 && self.sigma_l2 < self.sigma_u2 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid tunnel schedule: {self:?}")))
        }
    }
}

/// `sin(π (σ² − σ_l²)/(σ_u² − σ_l²) − π/2)`, running from −1 to 1 across the band.
fn sine_blend(var: f64, lo: f64, hi: f64) -> f64 {
    (PI * (var - lo) / (hi - lo) - FRAC_PI_2).sin()
}

/// Perpendicular stiffness for a predictive variance.
pub fn stiffness_from_variance(var: f64, s: &StiffnessSchedule) -> f64 {
    if var < s.sigma_l2 {
        s.a1 + s.a2
    } else if var <= s.sigma_u2 {
        s.a1 - s.a2 * sine_blend(var, s.sigma_l2, s.sigma_u2)
    } else {
        s.a1 - s.a2
    }
}

/// Tunnel threshold for a mean path variance.
pub fn tunnel_threshold_from_variance(mean_var: f64, t: &TunnelSchedule) -> f64 {
    if mean_var < t.sigma_l2 {
        t.b1 - t.b2
    } else if mean_var <= t.sigma_u2 {
        t.b1 + t.b2 * sine_blend(mean_var, t.sigma_l2, t.sigma_u2)
    } else {
        t.b1 + t.b2
    }
}

/// `(k_par, k_perp)` per attractor, from the GP variance at each attractor.
/// Attractors are remote-frame positions, the frame the GP is trained in.
pub fn build_stiffness_profile(
    attractors: &[Point2],
    gp: &GpModel,
    s: &StiffnessSchedule,
) -> Vec<(f64, f64)> {
    attractors
        .iter()
        .map(|&x| (s.k_par, stiffness_from_variance(gp.predict_variance(x), s)))
        .collect()
}

/// Arithmetic mean of the predictive variance over the attractors.
pub fn mean_path_variance(attractors: &[Point2], gp: &GpModel) -> f64 {
    if attractors.is_empty() {
        return gp.hyper().gamma_f;
    }
    attractors.iter().map(|&x| gp.predict_variance(x)).sum::<f64>() / attractors.len() as f64
}
