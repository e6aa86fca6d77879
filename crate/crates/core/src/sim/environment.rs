use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Rect};

/// Task geometry in the remote frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub walls: Vec<Rect>,
    #[serde(default)]
    pub obstacles: Vec<Rect>,
    pub goal: Point2,
    pub goal_tol: f64,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.goal_tol > 0.0) {
            return Err(Error::InvalidScenario("goal tolerance must be positive".into()));
        }
        if self.rects().any(|r| r.contains(self.goal)) {
            return Err(Error::InvalidScenario("goal lies inside a wall or obstacle".into()));
        }
        Ok(())
    }

    pub fn rects(&self) -> impl Iterator<Item = &Rect> {
        self.walls.iter().chain(&self.obstacles)
    }

    /// True when the swept segment touches any wall or obstacle.
    pub fn check_collision(&self, a: Point2, b: Point2) -> bool {
        self.rects().any(|r| r.intersects_segment(a, b))
    }

    /// True when any segment of the polyline collides.
    pub fn polyline_collides(&self, points: &[Point2]) -> bool {
        match points {
            [] => false,
            [p] => self.check_collision(*p, *p),
            _ => points.windows(2).any(|w| self.check_collision(w[0], w[1])),
        }
    }

    pub fn at_goal(&self, x: Point2) -> bool {
        x.distance(self.goal) < self.goal_tol
    }
}

pub fn check_collision(env: &Environment, a: Point2, b: Point2) -> bool {
    env.check_collision(a, b)
}
