//! Slip sweep over many seeds in parallel, written as CSV tables.
//! `MINMAX_THREADS` bounds the worker pool.
//!
//!     cargo run --release --example grid_sweep [out-dir]

use std::path::PathBuf;

use minmax_penalty::envs::GridLayout;
use minmax_penalty::experiment::{
    emit_sweep, run_grid_sweep, OutputFormat, SweepConfig, SweepKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("minmax-sweep"), PathBuf::from);
    let mut cfg = SweepConfig::new(SweepKind::Slip, GridLayout::default(), vec![0.0, 0.25, 0.5]);
    cfg.seeds = 20;
    let result = run_grid_sweep(&cfg)?;
    for row in &result.rows {
        println!(
            "{:?}: failure {:.4} ± {:.4}, penalty {:.3}, return {:.3}",
            row.arm, row.failure_rate, row.failure_stderr, row.final_penalty, row.mean_return
        );
    }
    for path in emit_sweep(&result, &out, OutputFormat::Csv)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
