//! Tabular Q-learning with the online Minmax-penalty estimator.

mod estimate;
mod qlearning;
mod training;

pub use estimate::MinmaxEstimate;
pub use qlearning::{q_learning_step, QTable};
pub use training::{
    run_fixed_penalty, run_training, train, write_episode_csv, EpisodeLog, LearnerConfig,
    StepRecord, Terminal, TrainingRun, UnsafeReward, CONVERGENCE_WINDOW, TAIL_EPISODES,
};
