//! The two benchmark environments: the parametric chain walk and the lava
//! gridworld.

mod chain;
pub mod grid;

pub use chain::{chain_walk, ChainWalkSpec};
pub use grid::{build_gridworld, Cell, GridLayout, GridSpec, GridWorld, DEFAULT_LAYOUT};

/// State and action indices of the chain walk.
pub mod chain_walk_ids {
    pub use super::chain::{A1, A2, S0, S1, S2, S3, STEP_REWARD};
}
