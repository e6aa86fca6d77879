//! Variable Stiffness Dynamical System guidance.
//!
//! A reference path is resampled into equidistant local attractors
//! `x_0 … x_N`. Segment `i` owns a linear spring `A_i (x − x_i)` whose
//! stiffness frame is aligned with the reshaped field at `x_i`, and a Gaussian
//! kernel centered on the segment midpoint. The guidance force blends the
//! springs with normalized kernel weights:
//!
//! ```text
//! u_c = α(x) Σ ω̃_i(x) A_i (x − x_i) − D ẋ
//! ```
//!
//! Spring `i` pulls towards the end of its segment, except that the spring
//! of the second-to-last segment pulls towards the goal. Without that, the
//! last two springs balance halfway along the final segment and the chain
//! never delivers the master to the goal.
//!
//! Guidance is active inside a tunnel around the path: a point is inside when
//! the largest raw kernel value `max_i ω_i(x)` reaches the threshold `ω̃_th`.
//! The raw value is used because the normalized weights of a straight chain do
//! not change with perpendicular distance and never exceed one half midway
//! between two centers, so they cannot delimit a tunnel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Force2, Mat2, Point2, Vec2, Vel2};
use crate::motion::{ReferencePath, ReshapedDs, SPEED_FLOOR};

/// Construction and control parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VsdsParams {
    /// Target distance between consecutive attractors, remote frame (m).
    pub spacing: f64,
    /// Kernel width as a fraction of the owning segment's length.
    pub kernel_ratio: f64,
    /// Damping matrix on the master (N·s/m).
    pub damping: Mat2,
    /// Distance from the chain start over which α ramps up, remote frame (m).
    pub ramp_dist: f64,
    /// α at the chain start.
    pub ramp_floor: f64,
}

impl Default for VsdsParams {
    fn default() -> Self {
        Self {
            spacing: 0.04,
            kernel_ratio: 1.0,
            damping: Mat2::scalar(25.0),
            ramp_dist: 0.08,
            ramp_floor: 0.2,
        }
    }
}

impl VsdsParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.spacing > 0.0
            && self.kernel_ratio > 0.0
            && self.ramp_dist > 0.0
            && (0.0..=1.0).contains(&self.ramp_floor)
            && self.damping.is_symmetric(1e-12)
            && self.damping.is_positive_definite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid VSDS parameters: {self:?}")))
        }
    }
}

/// Equidistant arc-length resampling of a path into `N + 1` attractors.
///
/// `N = max(1, round(L / spacing))`, so every segment has length `L / N`.
/// A single-point path yields just the goal.
pub fn sample_attractors(path: &ReferencePath, spacing: f64) -> Result<Vec<Point2>> {
    if !(spacing > 0.0) {
        return Err(Error::InvalidParameter("attractor spacing must be positive".into()));
    }
    let length = path.arc_length();
    if path.len() < 2 || length == 0.0 {
        return Ok(vec![path.goal()]);
    }
    if length < 0.5 * spacing {
        return Err(Error::PathTooShort { length });
    }
    let n = ((length / spacing).round() as usize).max(1);
    let step = length / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(path.start());
    for k in 1..n {
        out.push(path.point_at(step * k as f64));
    }
    out.push(path.goal());
    Ok(out)
}

/// Unit vector along the reshaped field at `x`.
pub fn local_direction(f: &ReshapedDs, x: Point2) -> Result<Vec2> {
    let v = f.eval(x);
    if v.norm() > SPEED_FLOOR {
        Ok(v.normalized().expect("non-zero"))
    } else {
        Err(Error::DegenerateDirection { y: x.y, z: x.z })
    }
}

/// Directions for attractors `x_1 … x_N`; where the field vanishes (the goal)
/// the incoming segment's direction is used instead.
pub fn attractor_directions(f: &ReshapedDs, attractors: &[Point2]) -> Vec<Vec2> {
    let fallback = Vec2::new(1.0, 0.0);
    (1..attractors.len().max(2))
        .map(|i| {
            let Some(&xi) = attractors.get(i) else {
                return fallback;
            };
            local_direction(f, xi).unwrap_or_else(|_| {
                (xi - attractors[i - 1]).normalized().unwrap_or(fallback)
            })
        })
        .collect()
}

/// `A = −Q diag(k_par, k_perp) Qᵀ` with `Q = [d, d⊥]`.
pub fn build_stiffness_frame(k_par: f64, k_perp: f64, d: Vec2) -> Mat2 {
    let q = Mat2::from_columns(d, d.perp());
    (q * Mat2::diag(k_par, k_perp) * q.transpose()).scale(-1.0)
}

/// `α_min + (1 − α_min) s²(3 − 2s)` with `s = clamp(‖x − x_0‖ / d_ramp, 0, 1)`.
pub fn alpha_ramp(x: Point2, x0: Point2, d_ramp: f64, floor: f64) -> f64 {
    let s = (x.distance(x0) / d_ramp).clamp(0.0, 1.0);
    floor + (1.0 - floor) * s * s * (3.0 - 2.0 * s)
}

/// Tunnel membership of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tunnel {
    Inside,
    Outside,
}

/// Kernel weights of a chain at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    /// Normalized weights ω̃_i, summing to one.
    pub normalized: Vec<f64>,
    /// Largest normalized weight.
    pub max: f64,
    pub argmax: usize,
    /// Largest raw kernel value `max_i ω_i`, the tunnel metric.
    pub peak_kernel: f64,
}

/// Local attractors with their springs and kernels, all in one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorChain {
    /// `x_0 … x_N`; `x_N` is the goal.
    attractors: Vec<Point2>,
    /// Rest point of each spring.
    targets: Vec<Point2>,
    /// Segment midpoints, one per spring.
    centers: Vec<Point2>,
    widths: Vec<f64>,
    stiffness: Vec<Mat2>,
    directions: Vec<Vec2>,
    /// `(k_par, k_perp)` per spring.
    gains: Vec<(f64, f64)>,
    ramp_dist: f64,
    ramp_floor: f64,
}

impl AttractorChain {
    /// Builds the chain. `directions` and `gains` hold one entry per spring,
    /// i.e. for attractors `x_1 … x_N`. A single attractor (start at the goal)
    /// yields one spring centered on the goal.
    pub fn new(
        attractors: Vec<Point2>,
        directions: Vec<Vec2>,
        gains: Vec<(f64, f64)>,
        params: &VsdsParams,
    ) -> Result<Self> {
        params.validate()?;
        if attractors.is_empty() {
            return Err(Error::InvalidParameter("chain needs at least one attractor".into()));
        }
        let attractors = if attractors.len() == 1 {
            vec![attractors[0], attractors[0]]
        } else {
            attractors
        };
        let n = attractors.len() - 1;
        if directions.len() != n || gains.len() != n {
            return Err(Error::InvalidParameter(format!(
                "chain with {n} springs got {} directions and {} gains",
                directions.len(),
                gains.len()
            )));
        }
        let mut centers = Vec::with_capacity(n);
        let mut widths = Vec::with_capacity(n);
        let mut stiffness = Vec::with_capacity(n);
        for i in 1..=n {
            let (a, b) = (attractors[i - 1], attractors[i]);
            centers.push(a.lerp(b, 0.5));
            let seg = a.distance(b);
            let seg = if seg > 0.0 { seg } else { params.spacing };
            widths.push(params.kernel_ratio * seg);
            let (k_par, k_perp) = gains[i - 1];
            if !(k_par > 0.0 && k_perp > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "stiffness must be positive, got ({k_par}, {k_perp})"
                )));
            }
            let d = directions[i - 1]
                .normalized()
                .ok_or_else(|| Error::InvalidParameter("zero stiffness direction".into()))?;
            stiffness.push(build_stiffness_frame(k_par, k_perp, d));
        }
        let directions = directions.iter().map(|d| d.normalized().unwrap()).collect();
        let mut targets = attractors[1..].to_vec();
        if n >= 2 {
            targets[n - 2] = attractors[n];
        }
        Ok(Self {
            attractors,
            targets,
            centers,
            widths,
            stiffness,
            directions,
            gains,
            ramp_dist: params.ramp_dist,
            ramp_floor: params.ramp_floor,
        })
    }

    pub fn attractors(&self) -> &[Point2] {
        &self.attractors
    }

    /// Where each spring is at rest.
    pub fn targets(&self) -> &[Point2] {
        &self.targets
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn stiffness_frames(&self) -> &[Mat2] {
        &self.stiffness
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.directions
    }

    pub fn gains(&self) -> &[(f64, f64)] {
        &self.gains
    }

    /// Number of springs N.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn start(&self) -> Point2 {
        self.attractors[0]
    }

    pub fn goal(&self) -> Point2 {
        *self.attractors.last().unwrap()
    }

    pub fn ramp_dist(&self) -> f64 {
        self.ramp_dist
    }

    /// The same chain seen through the similarity map `x ↦ scale·(x − from) + to`.
    /// Kernel widths and the ramp distance scale; stiffness matrices do not.
    pub fn mapped(&self, scale: f64, from: Point2, to: Point2) -> Self {
        let map = |p: Point2| (p - from) * scale + to;
        Self {
            attractors: self.attractors.iter().map(|&p| map(p)).collect(),
            targets: self.targets.iter().map(|&p| map(p)).collect(),
            centers: self.centers.iter().map(|&p| map(p)).collect(),
            widths: self.widths.iter().map(|w| w * scale).collect(),
            stiffness: self.stiffness.clone(),
            directions: self.directions.clone(),
            gains: self.gains.clone(),
            ramp_dist: self.ramp_dist * scale,
            ramp_floor: self.ramp_floor,
        }
    }

    fn log_kernels(&self, x: Point2) -> impl Iterator<Item = f64> + '_ {
        self.centers
            .iter()
            .zip(&self.widths)
            .map(move |(c, w)| -x.distance_squared(*c) / (2.0 * w * w))
    }

    /// Largest raw kernel value at `x`.
    pub fn peak_kernel(&self, x: Point2) -> f64 {
        self.log_kernels(x).fold(f64::NEG_INFINITY, f64::max).exp()
    }

    /// Normalized weights, computed relative to the largest exponent so that
    /// they stay well defined when every raw kernel underflows.
    pub fn weights(&self, x: Point2) -> Weights {
        let logs: Vec<f64> = self.log_kernels(x).collect();
        let (argmax, top) = logs
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, l)| if l > best.1 { (i, l) } else { best });
        let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let sum: f64 = raw.iter().sum();
        let normalized: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        Weights {
            max: normalized[argmax],
            argmax,
            normalized,
            peak_kernel: top.exp(),
        }
    }

    pub fn alpha(&self, x: Point2) -> f64 {
        alpha_ramp(x, self.start(), self.ramp_dist, self.ramp_floor)
    }

    /// Spring part `α Σ ω̃_i A_i (x − x_i)`, without damping.
    pub fn spring_force(&self, x: Point2) -> Force2 {
        let w = self.weights(x);
        let mut f = Vec2::ZERO;
        for (i, wi) in w.normalized.iter().enumerate() {
            f += self.stiffness[i] * (x - self.targets[i]) * *wi;
        }
        f * self.alpha(x)
    }

    /// Full guidance force including damping.
    pub fn control_force(&self, x: Point2, v: Vel2, damping: &Mat2) -> Force2 {
        self.spring_force(x) - *damping * v
    }

    pub fn tunnel_check(&self, threshold: f64, x: Point2) -> Tunnel {
        if self.peak_kernel(x) >= threshold {
            Tunnel::Inside
        } else {
            Tunnel::Outside
        }
    }
}

/// Free-function form of [`AttractorChain::tunnel_check`].
pub fn tunnel_check(chain: &AttractorChain, threshold: f64, x: Point2) -> Tunnel {
    chain.tunnel_check(threshold, x)
}

/// Free-function form of [`AttractorChain::control_force`].
pub fn control_force(chain: &AttractorChain, params: &VsdsParams, x: Point2, v: Vel2) -> Force2 {
    chain.control_force(x, v, &params.damping)
}
