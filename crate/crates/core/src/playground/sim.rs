use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::map::{GridPos, PlaygroundMap};
use crate::compiler::MotionCommand;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("move from col {} row {} to col {} row {} leaves the map", from.col, from.row, to.col, to.row)]
    OffMap { from: GridPos, to: GridPos },
    #[error("no energy left")]
    NoEnergy,
    #[error("no node carries icon {0:?}")]
    UnknownIcon(String),
    #[error("invalid energy model: {0}")]
    InvalidEnergyModel(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x_mm: f64,
    pub y_mm: f64,
    /// In `[0, 360)`, counter-clockwise from +x.
    pub heading_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    pub initial: f64,
    /// Cost of one pitch-length move over a fully dark segment.
    pub drain_per_step: f64,
    /// Flat cost of each in-place rotation.
    pub rotation_cost: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            initial: 100.0,
            drain_per_step: 10.0,
            rotation_cost: 0.0,
        }
    }
}

impl EnergyModel {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.initial > 0.0 && self.initial.is_finite()) {
            return Err(SimError::InvalidEnergyModel(
                "initial energy must be positive",
            ));
        }
        if !(self.drain_per_step >= 0.0 && self.drain_per_step.is_finite()) {
            return Err(SimError::InvalidEnergyModel("drain must be non-negative"));
        }
        if !(self.rotation_cost >= 0.0 && self.rotation_cost.is_finite()) {
            return Err(SimError::InvalidEnergyModel(
                "rotation cost must be non-negative",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub pose: Pose,
    pub energy: f64,
    pub cost: f64,
    /// Energy hit zero during this command.
    pub exhausted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimStatus {
    Completed,
    EnergyExhausted,
    OffMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEntry {
    pub pose: Pose,
    pub energy: f64,
    /// `None` for the initial state.
    pub command_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub trajectory: Vec<TrajectoryEntry>,
    pub status: SimStatus,
    pub final_pose: Pose,
    pub final_energy: f64,
    pub total_cost: f64,
    /// Index of the command that left the map, for [`SimStatus::OffMap`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_command: Option<usize>,
}

fn normalize_heading(h: f64) -> f64 {
    let r = h.rem_euclid(360.0);
    if r == 360.0 {
        0.0
    } else {
        r
    }
}

/// Unit vector for a heading in degrees, exact on multiples of 90°.
fn direction(deg: f64) -> (f64, f64) {
    let d = normalize_heading(deg);
    match d {
        0.0 => (1.0, 0.0),
        90.0 => (0.0, 1.0),
        180.0 => (-1.0, 0.0),
        270.0 => (0.0, -1.0),
        _ => (d.to_radians().cos(), d.to_radians().sin()),
    }
}

/// Pose of the map's start node and heading.
pub fn start_pose(map: &PlaygroundMap) -> Pose {
    let start = map.start();
    let node = map.node(&start.node).expect("validated start node");
    let (x_mm, y_mm) = map.position_mm(node.pos());
    Pose {
        x_mm,
        y_mm,
        heading_deg: start.heading as f64,
    }
}

/// Applies one command.
///
/// Moves snap to the lattice: the continuous end point is rounded to the
/// nearest node, which must be a neighbour joined to the current node by a
/// segment. Move cost is `darkness · drain · |distance| / pitch`; arcs use
/// their chord as the distance.
pub fn step(
    pose: Pose,
    cmd: MotionCommand,
    map: &PlaygroundMap,
    em: &EnergyModel,
    energy: f64,
) -> Result<StepOutcome, SimError> {
    if energy <= 0.0 {
        return Err(SimError::NoEnergy);
    }
    let (heading, distance, travel_dir) = match cmd {
        MotionCommand::Rotate { angle_deg } => {
            let cost = em.rotation_cost;
            let energy_after = (energy - cost).max(0.0);
            return Ok(StepOutcome {
                pose: Pose {
                    heading_deg: normalize_heading(pose.heading_deg + angle_deg),
                    ..pose
                },
                energy: energy_after,
                cost,
                exhausted: energy_after <= 0.0,
            });
        }
        MotionCommand::Translate { distance_mm } => {
            (pose.heading_deg, distance_mm, pose.heading_deg)
        }
        MotionCommand::Arc {
            heading_change_deg,
            chord_mm,
        } => (
            normalize_heading(pose.heading_deg + heading_change_deg),
            chord_mm,
            pose.heading_deg + heading_change_deg / 2.0,
        ),
    };
    let from = map.snap(pose.x_mm, pose.y_mm);
    let (dx, dy) = direction(travel_dir);
    let to = map.snap(pose.x_mm + distance * dx, pose.y_mm + distance * dy);
    let segment = map
        .segment_between(from, to)
        .ok_or(SimError::OffMap { from, to })?;
    let cost = segment.darkness * em.drain_per_step * distance.abs() / map.pitch_mm();
    let (x_mm, y_mm) = map.position_mm(to);
    let energy_after = (energy - cost).max(0.0);
    Ok(StepOutcome {
        pose: Pose {
            x_mm,
            y_mm,
            heading_deg: heading,
        },
        energy: energy_after,
        cost,
        exhausted: energy_after <= 0.0,
    })
}

/// Runs `commands` from the map's start until done, off the map, or out of
/// energy.
pub fn run(
    commands: &[MotionCommand],
    map: &PlaygroundMap,
    em: &EnergyModel,
) -> Result<SimResult, SimError> {
    em.validate()?;
    let mut pose = start_pose(map);
    let mut energy = em.initial;
    let mut total_cost = 0.0;
    let mut status = SimStatus::Completed;
    let mut failed_command = None;
    let mut trajectory = vec![TrajectoryEntry {
        pose,
        energy,
        command_index: None,
    }];
    for (i, &cmd) in commands.iter().enumerate() {
        match step(pose, cmd, map, em, energy) {
            Ok(out) => {
                pose = out.pose;
                energy = out.energy;
                total_cost += out.cost;
                trajectory.push(TrajectoryEntry {
                    pose,
                    energy,
                    command_index: Some(i),
                });
                if out.exhausted {
                    status = SimStatus::EnergyExhausted;
                    break;
                }
            }
            Err(SimError::OffMap { .. }) => {
                status = SimStatus::OffMap;
                failed_command = Some(i);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SimResult {
        trajectory,
        status,
        final_pose: pose,
        final_energy: energy,
        total_cost,
        failed_command,
    })
}

/// Whether a completed run ended within 1 mm of a node carrying `icon`.
pub fn reached(result: &SimResult, map: &PlaygroundMap, icon: &str) -> Result<bool, SimError> {
    let mut targets = map.icons().filter(|(name, _)| *name == icon).peekable();
    if targets.peek().is_none() {
        return Err(SimError::UnknownIcon(icon.to_owned()));
    }
    if result.status != SimStatus::Completed {
        return Ok(false);
    }
    let p = result.final_pose;
    Ok(targets.any(|(_, node)| {
        let (x, y) = map.position_mm(node.pos());
        (x - p.x_mm).hypot(y - p.y_mm) <= 1.0
    }))
}
