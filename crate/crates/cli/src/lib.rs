//! The `vsds` command: learn models from demonstrations, run scripted trials,
//! export fields for plotting and serve live sessions over WebSocket.

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};

use vsds_shared::geometry::{Point2, Vec2};
use vsds_shared::scenario::HumanKind;
use vsds_shared::sim::ControllerKind;

pub mod commands;
pub mod live;
pub mod serve;

#[derive(Debug, Parser)]
#[command(name = "vsds", version, about = "Shared-control workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a reshaped field to one or more demonstrations.
    Learn {
        /// A demonstration, or a JSON array of demonstrations.
        demos: PathBuf,
        /// Where to write the model; printed to stdout otherwise.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Gain of the linear base system.
        #[arg(long, default_value_t = 0.4)]
        gain: f64,
        /// Goal of the linear base system, as `y,z`.
        #[arg(long, default_value = "0,0", value_parser = parse_point)]
        goal: Point2,
    },
    /// Run one scenario with a controller and a scripted human.
    Simulate {
        scenario: PathBuf,
        /// Defaults to the scenario's controller.
        #[arg(long, value_parser = parse_controller)]
        controller: Option<ControllerKind>,
        /// Defaults to the scenario's human.
        #[arg(long, value_parser = parse_human)]
        human: Option<HumanKind>,
        /// Write the 60 Hz trajectory log here as JSON lines.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run every scenario in a directory under several controllers.
    Batch {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Comma-separated controllers.
        #[arg(long, default_value = "vsds,flow,openloop,free", value_delimiter = ',', value_parser = parse_controller)]
        controllers: Vec<ControllerKind>,
        /// Override every scenario's human.
        #[arg(long, value_parser = parse_human)]
        human: Option<HumanKind>,
        /// Output file; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a model on a grid, `y0:y1:ny,z0:z1:nz`.
    ExportField {
        model: PathBuf,
        #[arg(allow_hyphen_values = true)]
        grid: String,
        /// Also build guidance from this start (`y,z`) and export the force
        /// field, tunnel mask and stiffness ellipses.
        #[arg(long, value_parser = parse_point)]
        start: Option<Point2>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve live sessions over WebSocket.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Fixture name or scenario file.
        #[arg(long, default_value = "nominal")]
        scenario: String,
        /// Grid of the field frames.
        #[arg(long, allow_hyphen_values = true, default_value = serve::DEFAULT_GRID)]
        grid: String,
        /// Simulated seconds per wall-clock second.
        #[arg(long, default_value_t = 1.0)]
        speed: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_point(s: &str) -> Result<Point2> {
    let (y, z) = s.split_once(',').ok_or_else(|| anyhow!("expected `y,z`, got `{s}`"))?;
    Ok(Vec2::new(y.trim().parse()?, z.trim().parse()?))
}

fn parse_controller(s: &str) -> Result<ControllerKind> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn parse_human(s: &str) -> Result<HumanKind> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Learn { demos, model, gain, goal } => commands::learn(&demos, model.as_deref(), gain, goal),
        Command::Simulate { scenario, controller, human, log } => {
            commands::simulate(&scenario, controller, human, log.as_deref())
        }
        Command::Batch { dir, format, controllers, human, out } => {
            commands::batch(&dir, format, &controllers, human, out.as_deref())
        }
        Command::ExportField { model, grid, start, out } => commands::export(&model, &grid, start, out.as_deref()),
        Command::Serve { port, host, scenario, grid, speed } => serve::serve(&host, port, &scenario, &grid, speed),
    }
}
