//! Exact safety analysis and Minmax-penalty learning for tabular
//! stochastic-shortest-path MDPs.
//!
//! * [`mdp`] and [`format`]: the MDP model and its text format.
//! * [`analysis`]: per-policy evaluation, controllability, diameter, the
//!   Minmax penalty and undiscounted value iteration.
//! * [`envs`]: the chain walk and the lava gridworld.
//! * [`learner`]: tabular Q-learning that estimates the penalty online.
//! * [`experiment`]: sweeps, aggregation and CSV/TOML output.

pub mod analysis;
pub mod envs;
pub mod error;
pub mod experiment;
pub mod format;
pub mod learner;
pub mod mdp;

pub use error::{AnalysisError, EnvError, ExperimentError, FormatError, LearnerError, MdpError};
pub use mdp::{DetPolicy, MdpBuilder, RewardBounds, TabularMdp};
