//! Experiment harness: the chain-walk penalty study, gridworld sweeps and
//! their CSV/TOML tables.

mod chainwalk;
mod output;
mod sweep;

pub use chainwalk::{
    chainwalk_penalty_study, ChainwalkRow, ChainwalkStudy, PenaltyLabel, MINMAX_MARGIN,
};
pub use output::{
    arm_labels, chainwalk_from_toml, chainwalk_to_toml, emit_analysis, emit_chainwalk, emit_sweep,
    read_seed_csv, sweep_from_toml, sweep_header, sweep_to_toml, write_chainwalk_csv,
    write_seed_csv, write_sweep_csv, OutputFormat,
};
pub use sweep::{
    configured_threads, mean, run_arm, run_grid_sweep, stderr, with_pool, Arm, SeedMetrics,
    SweepConfig, SweepKind, SweepResult, SweepRow, DEFAULT_SWEEP_SLIP, THREADS_ENV,
};
