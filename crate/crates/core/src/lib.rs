//! Evolving piston/slime "flying machines" with MAP-Elites inside a
//! deterministic voxel simulator.

pub mod behavior;
pub mod error;
pub mod fitness;
pub mod genome;
pub mod harness;
pub mod search;
pub mod sim;
pub mod stats;
pub mod voxel;

pub use error::{Error, Result};
