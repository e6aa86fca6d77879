//! Scripted stand-ins for the human operator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geometry::{Force2, Point2, Vec2};
use crate::motion::ReferencePath;
use crate::session::ModeKind;
use crate::sim::dynamics::MasterState;
use crate::sim::mapping::WorkspaceMap;

/// Cap on the force a following human applies (N).
pub const F_MAX: f64 = 30.0;

/// Tracks an intended path with a spring towards a point slightly ahead of
/// the nearest path point. Before `hold_time` it instead holds the position
/// where it first acted.
#[derive(Debug, Clone, PartialEq)]
pub struct Follower {
    /// Spring gain on the master (N/m).
    pub k_h: f64,
    /// Damping of the arm (N·s/m).
    pub d_h: f64,
    /// Lookahead along the intent path, remote frame (m).
    pub lookahead: f64,
    pub hold_time: f64,
    pub hold_stiffness: f64,
    pub force_cap: f64,
    /// Remote frame.
    pub intent: ReferencePath,
}

impl Follower {
    fn validate(&self) -> Result<()> {
        let ok = self.k_h > 0.0
            && self.d_h >= 0.0
            && self.lookahead >= 0.0
            && self.hold_time >= 0.0
            && self.hold_stiffness > 0.0
            && self.force_cap > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("follower gains must be positive".into()))
        }
    }

    /// Master-frame point the follower is pulling towards.
    pub fn target(&self, state: &MasterState, map: &WorkspaceMap) -> Point2 {
        let x_r = map.to_remote(state.x);
        let s = self.intent.project(x_r).arc_length + self.lookahead;
        map.to_master(self.intent.point_at(s.min(self.intent.arc_length())))
    }

    pub fn force(&self, state: &MasterState, map: &WorkspaceMap, hold_point: Point2) -> Force2 {
        let f = if state.t < self.hold_time {
            (hold_point - state.x) * self.hold_stiffness - state.v * self.d_h
        } else {
            (self.target(state, map) - state.x) * self.k_h - state.v * self.d_h
        };
        f.clamp_norm(self.force_cap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HumanPolicy {
    Passive,
    Follower(Follower),
    /// Pushes along `direction` with a force growing at `ramp_rate` from
    /// `ramp_start` until the guidance lets go, then follows `post_escape`.
    Escaper {
        ramp_rate: f64,
        /// Time at which the push begins (s).
        ramp_start: f64,
        direction: Vec2,
        post_escape: Follower,
    },
    /// Forces supplied from outside, held until replaced.
    External,
}

impl HumanPolicy {
    pub fn validate(&self) -> Result<()> {
        match self {
            HumanPolicy::Passive | HumanPolicy::External => Ok(()),
            HumanPolicy::Follower(f) => f.validate(),
            HumanPolicy::Escaper { ramp_rate, ramp_start, direction, post_escape } => {
                if !(*ramp_rate > 0.0) || !(*ramp_start >= 0.0) || direction.normalized().is_none() {
                    return Err(Error::InvalidParameter("escaper needs a positive ramp and a direction".into()));
                }
                post_escape.validate()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HumanPolicy::Passive => "passive",
            HumanPolicy::Follower(_) => "follower",
            HumanPolicy::Escaper { .. } => "escaper",
            HumanPolicy::External => "external",
        }
    }
}

/// Stateless force of a policy. The escaper ramps while `mode` is guided and
/// follows afterwards; `external` is the last force received.
pub fn human_force(
    policy: &HumanPolicy,
    state: &MasterState,
    mode: ModeKind,
    map: &WorkspaceMap,
    external: Force2,
) -> Force2 {
    match policy {
        HumanPolicy::Passive => Force2::ZERO,
        HumanPolicy::Follower(f) => f.force(state, map, state.x),
        HumanPolicy::Escaper { ramp_rate, ramp_start, direction, post_escape } => {
            if mode == ModeKind::Guided {
                let push = ramp_rate * (state.t - ramp_start).max(0.0);
                direction.normalized().unwrap_or(Vec2::ZERO) * push
            } else {
                post_escape.force(state, map, state.x)
            }
        }
        HumanPolicy::External => external,
    }
}

/// A policy together with the little state it needs across ticks: where a
/// holding follower started, whether the escaper has already escaped, the
/// held external force and an optional seeded force noise.
#[derive(Debug, Clone)]
pub struct HumanAgent {
    policy: HumanPolicy,
    hold_point: Option<Point2>,
    escaped: bool,
    external: Force2,
    noise: Option<(ChaCha8Rng, Normal<f64>)>,
}

impl HumanAgent {
    pub fn new(policy: HumanPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(Self {
            policy,
            hold_point: None,
            escaped: false,
            external: Force2::ZERO,
            noise: None,
        })
    }

    /// Adds zero-mean Gaussian noise with standard deviation `std` (N) per
    /// axis, drawn from a generator seeded with `seed`.
    pub fn with_noise(mut self, std: f64, seed: u64) -> Result<Self> {
        if std > 0.0 {
            let normal = Normal::new(0.0, std).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            self.noise = Some((ChaCha8Rng::seed_from_u64(seed), normal));
        }
        Ok(self)
    }

    pub fn policy(&self) -> &HumanPolicy {
        &self.policy
    }

    pub fn has_escaped(&self) -> bool {
        self.escaped
    }

    /// Zero-order hold input for the external policy.
    pub fn set_external(&mut self, f: Force2) {
        self.external = f;
    }

    pub fn force(&mut self, state: &MasterState, mode: ModeKind, map: &WorkspaceMap) -> Force2 {
        let hold = *self.hold_point.get_or_insert(state.x);
        let f = match &self.policy {
            HumanPolicy::Follower(f) => f.force(state, map, hold),
            HumanPolicy::Escaper { post_escape, .. } if self.escaped || mode != ModeKind::Guided => {
                self.escaped = true;
                post_escape.force(state, map, hold)
            }
            p => human_force(p, state, mode, map, self.external),
        };
        match &mut self.noise {
            Some((rng, normal)) => f + Vec2::new(normal.sample(rng), normal.sample(rng)),
            None => f,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> ReferencePath {
        ReferencePath::new(vec![Vec2::new(-1.0, 0.0)], Vec2::ZERO).unwrap()
    }

    fn follower() -> Follower {
        Follower {
            k_h: 100.0,
            d_h: 0.0,
            lookahead: 0.1,
            hold_time: 0.0,
            hold_stiffness: 1000.0,
            force_cap: F_MAX,
            intent: line(),
        }
    }

    #[test]
    fn passive_is_zero() {
        let s = MasterState::at_rest(Vec2::new(0.3, 0.1));
        let f = human_force(&HumanPolicy::Passive, &s, ModeKind::Guided, &WorkspaceMap::identity(), Vec2::ZERO);
        assert_eq!(f, Vec2::ZERO);
    }

    #[test]
    fn escaper_ramp() {
        let p = HumanPolicy::Escaper {
            ramp_rate: 5.0,
            ramp_start: 0.0,
            direction: Vec2::new(0.0, 2.0),
            post_escape: follower(),
        };
        let s = MasterState { x: Vec2::new(-0.5, 0.0), v: Vec2::ZERO, t: 2.0 };
        let f = human_force(&p, &s, ModeKind::Guided, &WorkspaceMap::identity(), Vec2::ZERO);
        assert!((f.z - 10.0).abs() < 1e-12 && f.y == 0.0);
        let after = human_force(&p, &s, ModeKind::Free, &WorkspaceMap::identity(), Vec2::ZERO);
        assert!((after.y - 10.0).abs() < 1e-12 && after.z.abs() < 1e-12);
    }

    #[test]
    fn escaper_stays_escaped() {
        let p = HumanPolicy::Escaper {
            ramp_rate: 5.0,
            ramp_start: 0.0,
            direction: Vec2::new(0.0, 1.0),
            post_escape: follower(),
        };
        let mut a = HumanAgent::new(p).unwrap();
        let s = MasterState { x: Vec2::new(-0.5, 0.0), v: Vec2::ZERO, t: 2.0 };
        let map = WorkspaceMap::identity();
        assert!(a.force(&s, ModeKind::Guided, &map).z > 9.0);
        a.force(&s, ModeKind::Free, &map);
        assert!(a.force(&s, ModeKind::Guided, &map).z.abs() < 1e-12);
    }

    #[test]
    fn follower_is_capped_and_holds() {
        let mut f = follower();
        f.k_h = 1e6;
        let s = MasterState::at_rest(Vec2::new(-0.5, 0.2));
        assert!((f.force(&s, &WorkspaceMap::identity(), s.x).norm() - F_MAX).abs() < 1e-9);

        f.hold_time = 3.0;
        let mut a = HumanAgent::new(HumanPolicy::Follower(f)).unwrap();
        let map = WorkspaceMap::identity();
        assert_eq!(a.force(&s, ModeKind::Guided, &map), Vec2::ZERO);
        let moved = MasterState { x: Vec2::new(-0.49, 0.2), v: Vec2::ZERO, t: 1.0 };
        assert!(a.force(&moved, ModeKind::Guided, &map).y < 0.0);
    }

    #[test]
    fn external_holds_last_force() {
        let mut a = HumanAgent::new(HumanPolicy::External).unwrap();
        let s = MasterState::at_rest(Vec2::ZERO);
        let map = WorkspaceMap::identity();
        a.set_external(Vec2::new(1.0, 2.0));
        assert_eq!(a.force(&s, ModeKind::Free, &map), Vec2::new(1.0, 2.0));
        assert_eq!(a.force(&s, ModeKind::Free, &map), Vec2::new(1.0, 2.0));
    }

    #[test]
    fn noise_is_seeded() {
        let s = MasterState::at_rest(Vec2::ZERO);
        let map = WorkspaceMap::identity();
        let draw = |seed| {
            let mut a = HumanAgent::new(HumanPolicy::Passive).unwrap().with_noise(0.5, seed).unwrap();
            (0..5).map(|_| a.force(&s, ModeKind::Guided, &map)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }
}
