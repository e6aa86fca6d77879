use serde::{Deserialize, Serialize};

use crate::geometry::Point2;

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    /// Goal reached without collision before the time limit.
    pub success: bool,
    pub goal_reached: bool,
    pub collision: bool,
    /// Time at which the trial stopped (s).
    pub execution_time: f64,
    /// Mean of the squared jerk of the remote trajectory (m²/s⁶).
    pub mean_squared_jerk: f64,
    /// Peak human force over the window before the first escape (N).
    pub peak_escape_force: Option<f64>,
    /// Largest guidance force magnitude over the trial (N).
    pub peak_control_force: f64,
    pub escapes: usize,
    pub learned: usize,
}

/// Streaming mean squared jerk from equally spaced positions using the
/// central difference `(x[k+2] − 2x[k+1] + 2x[k−1] − x[k−2]) / (2 dt³)`.
#[derive(Debug, Clone)]
pub struct JerkAccumulator {
    dt: f64,
    window: [Point2; 5],
    filled: usize,
    sum: f64,
    count: usize,
}

impl JerkAccumulator {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            window: [Point2::ZERO; 5],
            filled: 0,
            sum: 0.0,
            count: 0,
        }
    }

    pub fn push(&mut self, x: Point2) {
        self.window.rotate_left(1);
        self.window[4] = x;
        self.filled = (self.filled + 1).min(5);
        if self.filled == 5 {
            let w = &self.window;
            let j = (w[4] - w[3] * 2.0 + w[1] * 2.0 - w[0]) * (1.0 / (2.0 * self.dt.powi(3)));
            self.sum += j.norm_squared();
            self.count += 1;
        }
    }

    /// Zero until five samples have been seen.
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }
}

/// Mean squared jerk of a whole trajectory.
pub fn mean_squared_jerk(xs: &[Point2], dt: f64) -> f64 {
    let mut acc = JerkAccumulator::new(dt);
    xs.iter().for_each(|&x| acc.push(x));
    acc.mean()
}
