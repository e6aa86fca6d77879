//! Motion generation: a linear attractor system reshaped by a learned,
//! state-dependent rotation and scaling.
//!
//! The base system `f_o(x) = -gain (x - x*)` is globally asymptotically
//! stable. A demonstration sample `(x, v)` is turned into the rotation angle
//! and scale that map `f_o(x)` onto `v`; a Gaussian process interpolates those
//! parameters in space, and the reshaped field is `(1 + κ(x)) R(φ(x)) f_o(x)`.
//! Because the modulation is multiplicative and `1 + κ > 0`, the only zero of
//! the reshaped field is still `x*`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Mat2, Point2, Vec2, Vel2};
use crate::gp::{GpDataset, GpHyperParams, GpModel};

/// Below this speed (m/s) a direction is considered undefined.
pub const SPEED_FLOOR: f64 = 1e-4;
/// Lower clamp for learned scaling factors.
pub const KAPPA_MIN: f64 = -0.95;
/// Upper clamp for learned scaling factors.
pub const KAPPA_MAX: f64 = 9.0;

/// Default integration step for reference paths (s).
pub const PATH_DT: f64 = 1e-3;
/// Default goal tolerance for reference paths (m).
pub const PATH_GOAL_TOL: f64 = 0.01;
/// Default step budget for reference paths.
pub const PATH_MAX_STEPS: usize = 100_000;

/// `ẋ = -gain (x - attractor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearDs {
    pub gain: f64,
    pub attractor: Point2,
}

impl LinearDs {
    pub fn new(gain: f64, attractor: Point2) -> Result<Self> {
        if !(gain > 0.0 && gain.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "linear DS gain must be positive, got {gain}"
            )));
        }
        Ok(Self { gain, attractor })
    }

    pub fn eval(&self, x: Point2) -> Vel2 {
        (x - self.attractor) * -self.gain
    }
}

/// Free-function form of [`LinearDs::eval`].
pub fn eval_linear_ds(ds: &LinearDs, x: Point2) -> Vel2 {
    ds.eval(x)
}

/// Rotation angle φ (rad) and scaling factor κ of the modulation `(1+κ) R(φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModulationParams {
    pub phi: f64,
    pub kappa: f64,
}

impl ModulationParams {
    pub const IDENTITY: ModulationParams = ModulationParams { phi: 0.0, kappa: 0.0 };

    pub fn new(phi: f64, kappa: f64) -> Result<Self> {
        if !(kappa > -1.0) {
            return Err(Error::KappaOutOfRange(kappa));
        }
        Ok(Self { phi, kappa })
    }

    /// Clamps κ into the learnable range, restoring the `κ > -1` invariant for
    /// regressed values that overshoot.
    pub fn clamped(self) -> Self {
        Self {
            phi: self.phi,
            kappa: self.kappa.clamp(KAPPA_MIN, KAPPA_MAX),
        }
    }
}

pub fn rotation_matrix(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// `(1 + κ) R(φ)`.
pub fn modulation_matrix(p: ModulationParams) -> Result<Mat2> {
    if !(p.kappa > -1.0) {
        return Err(Error::KappaOutOfRange(p.kappa));
    }
    Ok(rotation_matrix(p.phi).scale(1.0 + p.kappa))
}

/// Inverts the modulation for one demonstration sample: the angle from
/// `f_o(x)` to `v_demo` and the ratio of their speeds.
pub fn demo_to_modulation(x: Point2, v_demo: Vel2, ds: &LinearDs) -> Result<ModulationParams> {
    let nominal = ds.eval(x);
    let nominal_speed = nominal.norm();
    let demo_speed = v_demo.norm();
    if !(nominal_speed > SPEED_FLOOR) || !(demo_speed > SPEED_FLOOR) {
        return Err(Error::DegenerateSample { floor: SPEED_FLOOR });
    }
    let phi = wrap_angle(nominal.cross(v_demo).atan2(nominal.dot(v_demo)));
    let kappa = (demo_speed / nominal_speed - 1.0).clamp(KAPPA_MIN, KAPPA_MAX);
    Ok(ModulationParams { phi, kappa })
}

/// The base system modulated by a Gaussian process over (φ, κ).
#[derive(Debug, Clone)]
pub struct ReshapedDs {
    pub base: LinearDs,
    pub gp: GpModel,
}

impl ReshapedDs {
    pub fn new(base: LinearDs, gp: GpModel) -> Self {
        Self { base, gp }
    }

    /// A reshaped system with no data, identical to the base system.
    pub fn unmodulated(base: LinearDs) -> Self {
        let gp = GpModel::fit(GpDataset::default(), GpHyperParams::default())
            .expect("empty dataset always fits");
        Self { base, gp }
    }

    pub fn goal(&self) -> Point2 {
        self.base.attractor
    }

    /// Predictive-mean modulation at `x`, with κ clamped to the valid range.
    pub fn modulation_at(&self, x: Point2) -> ModulationParams {
        self.gp.predict_mean(x).clamped()
    }

    pub fn eval(&self, x: Point2) -> Vel2 {
        let nominal = self.base.eval(x);
        let m = self.modulation_at(x);
        rotation_matrix(m.phi).mul_vec(nominal) * (1.0 + m.kappa)
    }
}

/// Free-function form of [`ReshapedDs::eval`].
pub fn eval_reshaped_ds(f: &ReshapedDs, x: Point2) -> Vel2 {
    f.eval(x)
}

/// Ordered via points ending exactly at the goal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferencePath {
    points: Vec<Point2>,
    goal: Point2,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

/// Closest point on a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProjection {
    /// Arc length of the closest point from the path start (m).
    pub arc_length: f64,
    pub point: Point2,
    pub distance: f64,
    /// Index of the segment containing the closest point.
    pub segment: usize,
}

impl ReferencePath {
    /// Builds a path from raw points; exact consecutive duplicates are dropped
    /// and the final point is forced onto `goal`.
    pub fn new(mut points: Vec<Point2>, goal: Point2) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) || !goal.is_finite() {
            return Err(Error::InvalidParameter("non-finite path point".into()));
        }
        points.dedup();
        match points.last() {
            Some(last) if *last == goal => {}
            _ => points.push(goal),
        }
        points.dedup();
        let mut path = Self {
            points,
            goal,
            cumulative: Vec::new(),
        };
        path.rebuild_cumulative();
        Ok(path)
    }

    fn rebuild_cumulative(&mut self) {
        let mut acc = 0.0;
        self.cumulative = Vec::with_capacity(self.points.len());
        self.cumulative.push(0.0);
        for w in self.points.windows(2) {
            acc += w[0].distance(w[1]);
            self.cumulative.push(acc);
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn goal(&self) -> Point2 {
        self.goal
    }

    pub fn start(&self) -> Point2 {
        self.points[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arc_length(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Point at arc length `s`, clamped to the path ends.
    pub fn point_at(&self, s: f64) -> Point2 {
        if self.points.len() == 1 || s <= 0.0 {
            return self.points[0];
        }
        if s >= self.arc_length() {
            return self.goal;
        }
        let i = self.cumulative.partition_point(|&c| c <= s).max(1) - 1;
        let seg = self.cumulative[i + 1] - self.cumulative[i];
        let t = if seg > 0.0 { (s - self.cumulative[i]) / seg } else { 0.0 };
        self.points[i].lerp(self.points[i + 1], t)
    }

    /// Unit tangent at arc length `s` (direction of the containing segment).
    pub fn tangent_at(&self, s: f64) -> Option<Vec2> {
        if self.points.len() < 2 {
            return None;
        }
        let s = s.clamp(0.0, self.arc_length());
        let i = (self.cumulative.partition_point(|&c| c <= s).max(1) - 1).min(self.points.len() - 2);
        (self.points[i + 1] - self.points[i]).normalized()
    }

    pub fn project(&self, x: Point2) -> PathProjection {
        if self.points.len() == 1 {
            return PathProjection {
                arc_length: 0.0,
                point: self.points[0],
                distance: x.distance(self.points[0]),
                segment: 0,
            };
        }
        let mut best = PathProjection {
            arc_length: 0.0,
            point: self.points[0],
            distance: f64::INFINITY,
            segment: 0,
        };
        for (i, w) in self.points.windows(2).enumerate() {
            let d = w[1] - w[0];
            let len2 = d.norm_squared();
            let t = if len2 > 0.0 {
                ((x - w[0]).dot(d) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let p = w[0] + d * t;
            let dist = x.distance(p);
            if dist < best.distance {
                best = PathProjection {
                    arc_length: self.cumulative[i] + t * len2.sqrt(),
                    point: p,
                    distance: dist,
                    segment: i,
                };
            }
        }
        best
    }

    pub fn distance_to(&self, x: Point2) -> f64 {
        self.project(x).distance
    }

    /// Maps every point through `f`, keeping the goal consistent.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(self.points.iter().map(|&p| f(p)).collect(), f(self.goal))
    }
}

impl<'de> Deserialize<'de> for ReferencePath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<Point2>,
            goal: Point2,
        }
        let raw = Raw::deserialize(d)?;
        ReferencePath::new(raw.points, raw.goal).map_err(serde::de::Error::custom)
    }
}

/// Forward-Euler rollout of the reshaped field from `x0` until the goal
/// tolerance is entered; the entering point is replaced by the goal itself.
pub fn integrate_reference_path(
    f: &ReshapedDs,
    x0: Point2,
    dt: f64,
    goal_tol: f64,
    max_steps: usize,
) -> Result<ReferencePath> {
    if !(dt > 0.0) || !(goal_tol > 0.0) {
        return Err(Error::InvalidParameter(
            "path integration needs dt > 0 and goal_tol > 0".into(),
        ));
    }
    let goal = f.goal();
    let mut points = vec![x0];
    let mut x = x0;
    if x.distance(goal) < goal_tol {
        return ReferencePath::new(vec![goal], goal);
    }
    for _ in 0..max_steps {
        x += f.eval(x) * dt;
        if !x.is_finite() {
            break;
        }
        if x.distance(goal) < goal_tol {
            points.push(goal);
            return ReferencePath::new(points, goal);
        }
        points.push(x);
    }
    Err(Error::NoConvergence { steps: max_steps })
}

/// One recorded demonstration sample. Velocity may be absent, in which case it
/// is recovered by finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoSample {
    pub y: f64,
    pub z: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vz: Option<f64>,
}

/// A demonstration recorded at a fixed rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demonstration {
    pub rate_hz: f64,
    pub samples: Vec<DemoSample>,
}

impl Demonstration {
    pub fn from_pairs(rate_hz: f64, pairs: &[(Point2, Vel2)]) -> Self {
        Self {
            rate_hz,
            samples: pairs
                .iter()
                .map(|(p, v)| DemoSample {
                    y: p.y,
                    z: p.z,
                    vy: Some(v.y),
                    vz: Some(v.z),
                })
                .collect(),
        }
    }

    /// Position–velocity pairs. Missing velocities come from central
    /// differences (one-sided at the ends).
    pub fn pairs(&self) -> Result<Vec<(Point2, Vel2)>> {
        if !(self.rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "demonstration rate must be positive, got {}",
                self.rate_hz
            )));
        }
        let pos: Vec<Point2> = self.samples.iter().map(|s| Vec2::new(s.y, s.z)).collect();
        let n = pos.len();
        let dt = 1.0 / self.rate_hz;
        Ok(self
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let v = match (s.vy, s.vz) {
                    (Some(vy), Some(vz)) => Vec2::new(vy, vz),
                    _ if n < 2 => Vec2::ZERO,
                    _ if i == 0 => (pos[1] - pos[0]) * (1.0 / dt),
                    _ if i == n - 1 => (pos[n - 1] - pos[n - 2]) * (1.0 / dt),
                    _ => (pos[i + 1] - pos[i - 1]) * (0.5 / dt),
                };
                (pos[i], v)
            })
            .collect())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(&path, self.to_json()?).map_err(|e| Error::io(&path, e))
    }
}

/// Converts demonstration pairs into a GP training set, skipping samples
/// whose direction is undefined and positions already present.
pub fn dataset_from_demos<'a>(
    demos: impl IntoIterator<Item = &'a [(Point2, Vel2)]>,
    ds: &LinearDs,
) -> GpDataset {
    let mut dataset = GpDataset::default();
    for demo in demos {
        for &(x, v) in demo {
            if let Ok(m) = demo_to_modulation(x, v, ds) {
                // duplicates are dropped; the first sample wins
                let _ = dataset.push(x, m);
            }
        }
    }
    dataset
}

/// Fits the reshaped system to a set of demonstrations.
pub fn learn_from_demos(
    demos: &[Demonstration],
    ds: LinearDs,
    hyper: GpHyperParams,
) -> Result<ReshapedDs> {
    let pairs = demos.iter().map(|d| d.pairs()).collect::<Result<Vec<_>>>()?;
    let dataset = dataset_from_demos(pairs.iter().map(|p| p.as_slice()), &ds);
    Ok(ReshapedDs::new(ds, GpModel::fit(dataset, hyper)?))
}
