//! The batch-style subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use vsds_shared::geometry::Point2;
use vsds_shared::gp::GpHyperParams;
use vsds_shared::motion::{learn_from_demos, Demonstration, LinearDs};
use vsds_shared::scenario::{HumanKind, ModelFile, Scenario};
use vsds_shared::session::{build_guidance, export_field, GridSpec, SessionConfig, SessionEvent, Transition};
use vsds_shared::sim::{run_trial, ControllerKind, TrialMetrics, WorkspaceMap};

use crate::Format;

/// Reads one demonstration or an array of them.
pub fn read_demos(path: &Path) -> Result<Vec<Demonstration>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let demos = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    Ok(demos)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

pub fn learn(demos: &Path, model: Option<&Path>, gain: f64, goal: Point2) -> Result<()> {
    let demos = read_demos(demos)?;
    let samples: usize = demos.iter().map(|d| d.samples.len()).sum();
    let field = learn_from_demos(&demos, LinearDs::new(gain, goal)?, GpHyperParams::default())?;
    eprintln!("kept {} of {} samples from {} demonstration(s)", field.gp.len(), samples, demos.len());
    write_output(model, &ModelFile::from_field(&field).to_json()?)
}

/// Summary of one trial as printed by `simulate` and `batch --format json`.
#[derive(Debug, Serialize)]
pub struct TrialSummary {
    pub scenario: String,
    pub controller: ControllerKind,
    pub human: HumanKind,
    #[serde(flatten)]
    pub metrics: TrialMetrics,
    pub events: Vec<SessionEvent>,
    pub transitions: Vec<Transition>,
}

pub fn simulate(
    scenario: &Path,
    controller: Option<ControllerKind>,
    human: Option<HumanKind>,
    log: Option<&Path>,
) -> Result<()> {
    let s = Scenario::load(scenario)?;
    let controller = controller.unwrap_or(s.session.controller.kind);
    let human = human.unwrap_or(s.human.kind);
    let out = run_trial(&s, controller, human)?;
    if let Some(p) = log {
        out.write_log(p)?;
    }
    let summary = TrialSummary {
        scenario: s.name.clone(),
        controller,
        human,
        metrics: out.metrics,
        events: out.events,
        transitions: out.transitions,
    };
    write_output(None, &serde_json::to_string_pretty(&summary)?)
}

/// Scenario files in a directory, in name order.
pub fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "json"));
    files.sort();
    if files.is_empty() {
        bail!("no scenario files in {}", dir.display());
    }
    Ok(files)
}

#[derive(Debug, Serialize)]
struct BatchRow {
    scenario: String,
    controller: &'static str,
    human: &'static str,
    success: bool,
    goal_reached: bool,
    collision: bool,
    execution_time: f64,
    mean_squared_jerk: f64,
    peak_escape_force: Option<f64>,
    peak_control_force: f64,
    escapes: usize,
    learned: usize,
}

pub fn batch(
    dir: &Path,
    format: Format,
    controllers: &[ControllerKind],
    human: Option<HumanKind>,
    out: Option<&Path>,
) -> Result<()> {
    let mut summaries = Vec::new();
    for file in scenario_files(dir)? {
        let s = Scenario::load(&file)?;
        let human = human.unwrap_or(s.human.kind);
        for &c in controllers {
            let o = run_trial(&s, c, human).with_context(|| format!("{} with {}", file.display(), c.name()))?;
            summaries.push(TrialSummary {
                scenario: s.name.clone(),
                controller: c,
                human,
                metrics: o.metrics,
                events: o.events,
                transitions: o.transitions,
            });
        }
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&summaries)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for s in &summaries {
                let m = &s.metrics;
                w.serialize(BatchRow {
                    scenario: s.scenario.clone(),
                    controller: s.controller.name(),
                    human: s.human.name(),
                    success: m.success,
                    goal_reached: m.goal_reached,
                    collision: m.collision,
                    execution_time: m.execution_time,
                    mean_squared_jerk: m.mean_squared_jerk,
                    peak_escape_force: m.peak_escape_force,
                    peak_control_force: m.peak_control_force,
                    escapes: m.escapes,
                    learned: m.learned,
                })?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    write_output(out, &text)
}

pub fn export(model: &Path, grid: &str, start: Option<Point2>, out: Option<&Path>) -> Result<()> {
    let field = ModelFile::load(model)?.to_field()?;
    let grid: GridSpec = grid.parse()?;
    let guidance = match start {
        Some(x) => Some(build_guidance(&field, x, &WorkspaceMap::identity(), &SessionConfig::default(), 0.0)?),
        None => None,
    };
    let dump = export_field(&field, guidance.as_ref(), &grid)?;
    write_output(out, &serde_json::to_string(&dump)?)
}
