//! Lattice playground and motion simulator.
//!
//! Nodes sit on a square lattice (`x = col · pitch`, `y = row · pitch`)
//! and are joined by segments whose darkness sets the energy cost of
//! driving along them.

mod map;
mod sim;

pub use map::{load_map, GridPos, MapError, Node, PlaygroundMap, Segment, StartPose};
pub use sim::{
    reached, run, start_pose, step, EnergyModel, Pose, SimError, SimResult, SimStatus, StepOutcome,
    TrajectoryEntry,
};
