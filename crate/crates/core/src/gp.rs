//! Gaussian process regression from positions to modulation parameters.
//!
//! Two output channels (φ and κ) share their inputs, kernel and
//! hyperparameters, so a single Cholesky factor of `K + σ_n² I` serves both
//! and there is one predictive variance per query point.
//!
//! Evaluation order is fixed: the predictive mean accumulates
//! `k(x, x_i) α_i` over training points in dataset order, and the variance
//! subtracts the squared forward-substitution terms in the same order. A model
//! loaded from its JSON form therefore predicts bit-identically to the model
//! that was saved.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vel2};
use crate::motion::{demo_to_modulation, rotation_matrix, LinearDs, ModulationParams};

/// Inputs closer than this (m) are considered identical.
pub const DUPLICATE_TOL: f64 = 1e-9;

/// Squared-exponential kernel hyperparameters.
///
/// `length_scale` divides the squared distance directly, `k = γ_f exp(-d²/(2l))`,
/// so its unit is m².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpHyperParams {
    pub gamma_f: f64,
    #[serde(rename = "l")]
    pub length_scale: f64,
    pub noise_var: f64,
}

impl Default for GpHyperParams {
    fn default() -> Self {
        Self {
            gamma_f: 1.0,
            length_scale: 0.001,
            noise_var: 0.01,
        }
    }
}

impl GpHyperParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_f > 0.0) || !(self.length_scale > 0.0) || !(self.noise_var >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "GP hyperparameters must satisfy gamma_f > 0, l > 0, noise_var >= 0: {self:?}"
            )));
        }
        Ok(())
    }
}

pub fn kernel(x: Point2, x2: Point2, h: &GpHyperParams) -> f64 {
    h.gamma_f * (-x.distance_squared(x2) / (2.0 * h.length_scale)).exp()
}

/// Training inputs with their (φ, κ) targets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GpDataset {
    inputs: Vec<Point2>,
    outputs: Vec<ModulationParams>,
}

impl GpDataset {
    pub fn new(inputs: Vec<Point2>, outputs: Vec<ModulationParams>) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::InvalidDataset(format!(
                "{} inputs but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        let mut d = GpDataset::default();
        for (x, m) in inputs.into_iter().zip(outputs) {
            d.push(x, m)?;
        }
        Ok(d)
    }

    /// Appends a training pair, rejecting inputs that duplicate an existing one.
    pub fn push(&mut self, x: Point2, m: ModulationParams) -> Result<()> {
        if !x.is_finite() || !m.phi.is_finite() || !m.kappa.is_finite() {
            return Err(Error::InvalidDataset("non-finite training pair".into()));
        }
        if self.contains_input(x) {
            return Err(Error::InvalidDataset(format!(
                "duplicate input ({}, {})",
                x.y, x.z
            )));
        }
        self.inputs.push(x);
        self.outputs.push(m);
        Ok(())
    }

    pub fn contains_input(&self, x: Point2) -> bool {
        self.inputs.iter().any(|p| p.distance(x) <= DUPLICATE_TOL)
    }

    pub fn inputs(&self) -> &[Point2] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[ModulationParams] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point2, ModulationParams)> + '_ {
        self.inputs.iter().copied().zip(self.outputs.iter().copied())
    }

    /// Keeps the pairs for which `keep` returns true, preserving order.
    pub fn retain(&mut self, mut keep: impl FnMut(Point2) -> bool) {
        let mut idx = 0;
        let flags: Vec<bool> = self.inputs.iter().map(|&x| keep(x)).collect();
        self.inputs.retain(|_| {
            let k = flags[idx];
            idx += 1;
            k
        });
        idx = 0;
        self.outputs.retain(|_| {
            let k = flags[idx];
            idx += 1;
            k
        });
    }
}

/// Predictive mean of both channels plus the shared variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpPrediction {
    pub mean: ModulationParams,
    pub variance: f64,
}

/// A dataset with its cached factorization.
#[derive(Debug, Clone)]
pub struct GpModel {
    dataset: GpDataset,
    hyper: GpHyperParams,
    /// Lower Cholesky factor of `K + σ_n² I`.
    chol_lower: DMatrix<f64>,
    alpha_phi: Vec<f64>,
    alpha_kappa: Vec<f64>,
}

impl GpModel {
    pub fn fit(dataset: GpDataset, hyper: GpHyperParams) -> Result<Self> {
        hyper.validate()?;
        let n = dataset.len();
        if n == 0 {
            return Ok(Self {
                dataset,
                hyper,
                chol_lower: DMatrix::zeros(0, 0),
                alpha_phi: Vec::new(),
                alpha_kappa: Vec::new(),
            });
        }
        let xs = dataset.inputs();
        let gram = DMatrix::from_fn(n, n, |i, j| {
            let k = kernel(xs[i], xs[j], &hyper);
            if i == j {
                k + hyper.noise_var
            } else {
                k
            }
        });
        let chol = gram
            .cholesky()
            .ok_or(Error::SingularKernel { points: n })?;
        let y_phi = DVector::from_iterator(n, dataset.outputs().iter().map(|m| m.phi));
        let y_kappa = DVector::from_iterator(n, dataset.outputs().iter().map(|m| m.kappa));
        let alpha_phi = chol.solve(&y_phi).iter().copied().collect();
        let alpha_kappa = chol.solve(&y_kappa).iter().copied().collect();
        Ok(Self {
            dataset,
            hyper,
            chol_lower: chol.unpack(),
            alpha_phi,
            alpha_kappa,
        })
    }

    pub fn dataset(&self) -> &GpDataset {
        &self.dataset
    }

    pub fn hyper(&self) -> &GpHyperParams {
        &self.hyper
    }

    /// Lower Cholesky factor of the regularized Gram matrix.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.chol_lower
    }

    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    /// Predictive mean only; O(n) per query.
    pub fn predict_mean(&self, x: Point2) -> ModulationParams {
        let mut phi = 0.0;
        let mut kappa = 0.0;
        for (i, &xi) in self.dataset.inputs().iter().enumerate() {
            let k = kernel(x, xi, &self.hyper);
            phi += k * self.alpha_phi[i];
            kappa += k * self.alpha_kappa[i];
        }
        ModulationParams { phi, kappa }
    }

    /// Predictive variance only; O(n²) per query.
    pub fn predict_variance(&self, x: Point2) -> f64 {
        let n = self.dataset.len();
        let prior = self.hyper.gamma_f;
        if n == 0 {
            return prior;
        }
        let xs = self.dataset.inputs();
        let l = &self.chol_lower;
        // v = L⁻¹ k*
        let mut v = vec![0.0; n];
        let mut reduction = 0.0;
        for i in 0..n {
            let mut acc = kernel(x, xs[i], &self.hyper);
            for j in 0..i {
                acc -= l[(i, j)] * v[j];
            }
            v[i] = acc / l[(i, i)];
            reduction += v[i] * v[i];
        }
        (prior - reduction).max(0.0)
    }

    pub fn predict(&self, x: Point2) -> GpPrediction {
        GpPrediction {
            mean: self.predict_mean(x),
            variance: self.predict_variance(x),
        }
    }

    /// Velocity of the reshaped field implied by this model at `x`.
    pub fn predicted_velocity(&self, x: Point2, ds: &LinearDs) -> Vel2 {
        let m = self.predict_mean(x).clamped();
        rotation_matrix(m.phi).mul_vec(ds.eval(x)) * (1.0 + m.kappa)
    }

    pub fn to_file(&self) -> GpFile {
        GpFile {
            hyper: self.hyper,
            points: self
                .dataset
                .iter()
                .map(|(x, m)| GpPoint {
                    y: x.y,
                    z: x.z,
                    phi: m.phi,
                    kappa: m.kappa,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &GpFile) -> Result<Self> {
        let mut dataset = GpDataset::default();
        for p in &file.points {
            dataset.push(Point2::new(p.y, p.z), ModulationParams { phi: p.phi, kappa: p.kappa })?;
        }
        Self::fit(dataset, file.hyper)
    }
}

/// Free-function form of [`GpModel::fit`].
pub fn fit(dataset: GpDataset, h: GpHyperParams) -> Result<GpModel> {
    GpModel::fit(dataset, h)
}

/// Free-function form of [`GpModel::predict`].
pub fn predict(m: &GpModel, x: Point2) -> GpPrediction {
    m.predict(x)
}

/// Persisted GP dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpFile {
    pub hyper: GpHyperParams,
    pub points: Vec<GpPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpPoint {
    pub y: f64,
    pub z: f64,
    pub phi: f64,
    pub kappa: f64,
}

impl GpFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}

/// Thresholds of the trajectory-sparsified dataset update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementalConfig {
    /// Radius of the knowledge region around each stored point (m).
    pub r_th: f64,
    /// Speed discrepancy that triggers insertion (m/s).
    pub delta_speed: f64,
    /// Angular discrepancy that triggers insertion (rad).
    pub delta_angle: f64,
}

impl Default for IncrementalConfig {
    fn default() -> Self {
        Self {
            r_th: 0.03,
            delta_speed: 0.05,
            delta_angle: 0.2,
        }
    }
}

/// What one incremental update did to the dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpdateReport {
    /// Stored inputs dropped because a new sample fell in their knowledge region.
    pub removed: Vec<Point2>,
    /// New samples inserted.
    pub added: Vec<Point2>,
    /// New samples skipped because their direction was undefined.
    pub degenerate: usize,
}

/// Speed and angle by which a demonstrated velocity departs from a prediction.
pub fn velocity_discrepancy(demo: Vel2, predicted: Vel2) -> (f64, f64) {
    let speed_gap = demo.norm() - predicted.norm();
    let denom = demo.norm() * predicted.norm();
    let angle = if denom > 0.0 {
        (demo.dot(predicted) / denom).clamp(-1.0, 1.0).acos()
    } else {
        std::f64::consts::PI
    };
    (speed_gap, angle)
}

/// Two-pass dataset update.
///
/// Pass 1 drops every stored point lying within `r_th` of any new sample.
/// Pass 2 predicts the velocity at each new sample with the model refitted on
/// the pass-1 dataset, and inserts the sample when
/// `‖v_demo‖ − ‖v_pred‖ ≥ Δ1` or `angle(v_demo, v_pred) ≥ Δ2`.
/// The returned model is refitted once on the final dataset.
pub fn incremental_update(
    model: &GpModel,
    new_demo: &[(Point2, Vel2)],
    ds: &LinearDs,
    cfg: &IncrementalConfig,
) -> Result<(GpModel, UpdateReport)> {
    let mut report = UpdateReport::default();
    let mut dataset = model.dataset().clone();

    dataset.retain(|xg| {
        let keep = new_demo.iter().all(|(xd, _)| xd.distance(xg) > cfg.r_th);
        if !keep {
            report.removed.push(xg);
        }
        keep
    });
    let pruned = GpModel::fit(dataset.clone(), *model.hyper())?;

    for &(xd, vd) in new_demo {
        let m = match demo_to_modulation(xd, vd, ds) {
            Ok(m) => m,
            Err(Error::DegenerateSample { .. }) => {
                report.degenerate += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let predicted = pruned.predicted_velocity(xd, ds);
        let (speed_gap, angle) = velocity_discrepancy(vd, predicted);
        if (speed_gap >= cfg.delta_speed || angle >= cfg.delta_angle) && !dataset.contains_input(xd) {
            dataset.push(xd, m)?;
            report.added.push(xd);
        }
    }

    Ok((GpModel::fit(dataset, *model.hyper())?, report))
}
