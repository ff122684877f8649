pub mod belief;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod spd;
pub mod volume;

pub use belief::{Belief, Chain, NoiseModel};
pub use error::{Error, Result};
pub use rng::RngState;
pub use volume::TraceBand;
pub mod geometry;
pub use geometry::{Aabb, ConvexObstacle, Environment, Polytope};
pub mod planner;
pub use planner::{plan, Mode, PlanResult, PlannerParams, Roadmap};
pub mod baseline;
pub mod oracle;
pub mod stats;
pub mod config;
pub mod persist;
pub mod harness;
