//! Reproducible experiment descriptions and the learned-model file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vec2};
use crate::gp::{GpFile, GpHyperParams, GpModel};
use crate::motion::{
    integrate_reference_path, learn_from_demos, Demonstration, LinearDs, ReferencePath, ReshapedDs,
    PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS,
};
use crate::session::{Session, SessionConfig};
use crate::sim::controllers::ControllerKind;
use crate::sim::environment::Environment;
use crate::sim::human::{Follower, HumanAgent, HumanPolicy, F_MAX};
use crate::sim::mapping::WorkspaceMap;

/// A learned reshaped system on disk: the base system plus the GP points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub linear_ds: LinearDs,
    #[serde(flatten)]
    pub gp: GpFile,
}

impl ModelFile {
    pub fn from_field(field: &ReshapedDs) -> Self {
        Self {
            linear_ds: field.base,
            gp: field.gp.to_file(),
        }
    }

    pub fn to_field(&self) -> Result<ReshapedDs> {
        Ok(ReshapedDs::new(self.linear_ds, GpModel::from_file(&self.gp)?))
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

/// Where the reshaped field of a scenario comes from. Relative paths are
/// resolved against the scenario file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSpec {
    /// The unmodified linear system.
    #[default]
    None,
    DemoFiles(Vec<PathBuf>),
    Demos(Vec<Demonstration>),
    /// A model file; its base system replaces the scenario's.
    ModelFile(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorkspaceConfig {
    pub beta: f64,
    pub master_origin: Point2,
    /// Remote point mapped onto the master origin; the start when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remote_origin: Option<Point2>,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        Self {
            beta: 0.2,
            master_origin: Point2::ZERO,
            remote_origin: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanKind {
    #[default]
    Passive,
    Follower,
    Escaper,
    External,
}

impl std::str::FromStr for HumanKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "passive" => Ok(Self::Passive),
            "follower" => Ok(Self::Follower),
            "escaper" => Ok(Self::Escaper),
            "external" => Ok(Self::External),
            other => Err(format!("unknown human policy '{other}'")),
        }
    }
}

impl HumanKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Passive => "passive",
            Self::Follower => "follower",
            Self::Escaper => "escaper",
            Self::External => "external",
        }
    }
}

/// Parameters for every scripted human; `kind` picks which one acts.
/// Paths are in the remote frame and end at the goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HumanConfig {
    pub kind: HumanKind,
    pub k_h: f64,
    pub d_h: f64,
    pub lookahead: f64,
    pub hold_time: f64,
    pub hold_stiffness: f64,
    pub force_cap: f64,
    pub ramp_rate: f64,
    pub ramp_start: f64,
    pub direction: Vec2,
    /// Follower path; the field's reference path from the start when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intent_path: Option<Vec<Point2>>,
    /// Path the escaper follows once free; the intent path when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_escape_path: Option<Vec<Point2>>,
    /// Standard deviation of per-axis force noise (N).
    pub noise_std: f64,
}

impl Default for HumanConfig {
    fn default() -> Self {
        Self {
            kind: HumanKind::Passive,
            k_h: 200.0,
            d_h: 20.0,
            lookahead: 0.03,
            hold_time: 0.0,
            hold_stiffness: 2000.0,
            force_cap: F_MAX,
            ramp_rate: 25.0,
            ramp_start: 0.0,
            direction: Vec2::new(0.0, 1.0),
            intent_path: None,
            post_escape_path: None,
            noise_std: 0.0,
        }
    }
}

/// One reproducible experiment. Everything except `name`, `environment`,
/// `linear_ds` and `start` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub environment: Environment,
    pub linear_ds: LinearDs,
    #[serde(default)]
    pub hyper: GpHyperParams,
    #[serde(default)]
    pub model: ModelSpec,
    /// Remote frame.
    pub start: Point2,
    #[serde(default)]
    pub workspace: WorkspaceConfig,
    #[serde(flatten)]
    pub session: SessionConfig,
    #[serde(default)]
    pub human: HumanConfig,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_t_max() -> f64 {
    60.0
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s: Scenario = serde_json::from_str(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf);
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(&path, self.to_json()?).map_err(|e| Error::io(&path, e))
    }

    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        self.session.validate()?;
        self.hyper.validate()?;
        LinearDs::new(self.linear_ds.gain, self.linear_ds.attractor)?;
        if !(self.t_max > 0.0) {
            return Err(Error::InvalidScenario("t_max must be positive".into()));
        }
        if self.environment.rects().any(|r| r.contains(self.start)) {
            return Err(Error::InvalidScenario("start lies inside a wall or obstacle".into()));
        }
        self.map().map(|_| ())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// Builds the reshaped field named by `model`.
    pub fn field(&self) -> Result<ReshapedDs> {
        match &self.model {
            ModelSpec::None => learn_from_demos(&[], self.linear_ds, self.hyper),
            ModelSpec::Demos(demos) => learn_from_demos(demos, self.linear_ds, self.hyper),
            ModelSpec::DemoFiles(files) => {
                let demos = files
                    .iter()
                    .map(|f| Demonstration::load(self.resolve(f)))
                    .collect::<Result<Vec<_>>>()?;
                learn_from_demos(&demos, self.linear_ds, self.hyper)
            }
            ModelSpec::ModelFile(f) => ModelFile::load(self.resolve(f))?.to_field(),
        }
    }

    pub fn map(&self) -> Result<WorkspaceMap> {
        let w = &self.workspace;
        WorkspaceMap::new(w.beta, w.master_origin, w.remote_origin.unwrap_or(self.start))
    }

    /// Session configuration with an optional controller override.
    pub fn session_config(&self, controller: Option<ControllerKind>) -> SessionConfig {
        let mut c = self.session;
        if let Some(kind) = controller {
            c.controller.kind = kind;
        }
        c
    }

    fn path_or(&self, points: Option<&Vec<Point2>>, fallback: &ReferencePath) -> Result<ReferencePath> {
        match points {
            Some(p) => ReferencePath::new(p.clone(), self.environment.goal),
            None => Ok(fallback.clone()),
        }
    }

    /// The scripted human of kind `kind`, noise seeded from the scenario seed.
    pub fn human_agent(&self, kind: HumanKind, field: &ReshapedDs) -> Result<HumanAgent> {
        let h = &self.human;
        let policy = match kind {
            HumanKind::Passive => HumanPolicy::Passive,
            HumanKind::External => HumanPolicy::External,
            HumanKind::Follower | HumanKind::Escaper => {
                let reference = integrate_reference_path(field, self.start, PATH_DT, PATH_GOAL_TOL, PATH_MAX_STEPS)?;
                let intent = self.path_or(h.intent_path.as_ref(), &reference)?;
                let follower = |intent: ReferencePath| Follower {
                    k_h: h.k_h,
                    d_h: h.d_h,
                    lookahead: h.lookahead,
                    hold_time: h.hold_time,
                    hold_stiffness: h.hold_stiffness,
                    force_cap: h.force_cap,
                    intent,
                };
                if kind == HumanKind::Follower {
                    HumanPolicy::Follower(follower(intent))
                } else {
                    let post = self.path_or(h.post_escape_path.as_ref(), &intent)?;
                    HumanPolicy::Escaper {
                        ramp_rate: h.ramp_rate,
                        ramp_start: h.ramp_start,
                        direction: h.direction,
                        post_escape: Follower { hold_time: 0.0, ..follower(post) },
                    }
                }
            }
        };
        HumanAgent::new(policy)?.with_noise(h.noise_std, self.seed)
    }

    /// An idle session over this scenario's field and environment, master at
    /// rest over the start.
    pub fn session(&self, controller: Option<ControllerKind>) -> Result<Session> {
        self.session_with_field(self.field()?, controller)
    }

    /// As [`Scenario::session`] with a field that is already built.
    pub fn session_with_field(&self, field: ReshapedDs, controller: Option<ControllerKind>) -> Result<Session> {
        Session::new(field, self.environment.clone(), self.map()?, self.session_config(controller), self.start)
    }
}
