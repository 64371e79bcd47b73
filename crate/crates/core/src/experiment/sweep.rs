use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::envs::{build_gridworld, GridLayout, GridSpec};
use crate::error::ExperimentError;
use crate::learner::{train, LearnerConfig, TrainingRun, UnsafeReward};

/// Environment variable bounding the worker pool.
pub const THREADS_ENV: &str = "MINMAX_THREADS";

/// Slip probability used by penalty sweeps unless overridden.
pub const DEFAULT_SWEEP_SLIP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// Fixed lava penalties plus one adaptive arm, at a fixed slip.
    Penalty,
    /// The adaptive learner at each slip probability.
    Slip,
}

impl SweepKind {
    pub fn variable(self) -> &'static str {
        match self {
            SweepKind::Penalty => "penalty",
            SweepKind::Slip => "slip",
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.variable())
    }
}

impl FromStr for SweepKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "penalty" => Ok(SweepKind::Penalty),
            "slip" => Ok(SweepKind::Slip),
            other => Err(ExperimentError::Sweep(format!(
                "unknown sweep kind {other:?}"
            ))),
        }
    }
}

/// One arm of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    /// Constant lava reward.
    Fixed(f64),
    /// Online Minmax estimate at the given slip probability.
    Adaptive(f64),
}

impl Arm {
    /// Value written in the sweep-variable column.
    pub fn label(&self, kind: SweepKind) -> String {
        match (kind, self) {
            (SweepKind::Penalty, Arm::Adaptive(_)) => "adaptive".to_string(),
            (_, Arm::Fixed(v)) | (_, Arm::Adaptive(v)) => format!("{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub layout: GridLayout,
    pub settings: Vec<f64>,
    pub seeds: usize,
    pub base_seed: u64,
    /// Slip for penalty sweeps; ignored by slip sweeps.
    pub slip: f64,
    pub learner: LearnerConfig,
}

impl SweepConfig {
    pub fn new(kind: SweepKind, layout: GridLayout, settings: Vec<f64>) -> Self {
        Self {
            kind,
            layout,
            settings,
            seeds: 70,
            base_seed: 0,
            slip: DEFAULT_SWEEP_SLIP,
            learner: LearnerConfig::default(),
        }
    }

    /// Seeds are `base_seed, base_seed + 1, ...`.
    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64)
            .map(|k| self.base_seed.wrapping_add(k))
            .collect()
    }

    pub fn arms(&self) -> Vec<Arm> {
        match self.kind {
            SweepKind::Penalty => {
                let mut arms: Vec<Arm> = self.settings.iter().map(|&p| Arm::Fixed(p)).collect();
                arms.push(Arm::Adaptive(self.slip));
                arms
            }
            SweepKind::Slip => self.settings.iter().map(|&sp| Arm::Adaptive(sp)).collect(),
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.seeds == 0 {
            return Err(ExperimentError::Sweep(
                "at least one seed is required".into(),
            ));
        }
        if let Some(v) = self.settings.iter().find(|v| !v.is_finite()) {
            return Err(ExperimentError::Sweep(format!("non-finite setting {v}")));
        }
        self.learner.validate()?;
        Ok(())
    }
}

/// Metrics of one training run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedMetrics {
    pub seed: u64,
    pub failure_rate: f64,
    pub behaviour_failure_rate: f64,
    pub mean_return: f64,
    /// Steps until the greedy policy settled; total steps if it never did.
    pub steps_to_convergence: u64,
    pub converged: bool,
    pub final_penalty: f64,
}

impl SeedMetrics {
    pub fn from_run(seed: u64, run: &TrainingRun) -> Self {
        Self {
            seed,
            failure_rate: run.converged_failure_rate,
            behaviour_failure_rate: run.behaviour_failure_rate,
            mean_return: run.mean_return,
            steps_to_convergence: run.steps_to_convergence.unwrap_or(run.total_steps),
            converged: run.steps_to_convergence.is_some(),
            final_penalty: run.final_penalty(),
        }
    }
}

/// Aggregate over seeds for one arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub arm: Arm,
    pub failure_rate: f64,
    pub failure_stderr: f64,
    pub behaviour_failure_rate: f64,
    pub mean_return: f64,
    pub steps_to_convergence: f64,
    pub final_penalty: f64,
    pub per_seed: Vec<SeedMetrics>,
}

impl SweepRow {
    pub fn aggregate(arm: Arm, per_seed: Vec<SeedMetrics>) -> Self {
        let failures: Vec<f64> = per_seed.iter().map(|m| m.failure_rate).collect();
        Self {
            arm,
            failure_rate: mean(&failures),
            failure_stderr: stderr(&failures),
            behaviour_failure_rate: mean_of(&per_seed, |m| m.behaviour_failure_rate),
            mean_return: mean_of(&per_seed, |m| m.mean_return),
            steps_to_convergence: mean_of(&per_seed, |m| m.steps_to_convergence as f64),
            final_penalty: mean_of(&per_seed, |m| m.final_penalty),
            per_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub seeds: Vec<u64>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn variable(&self) -> &'static str {
        self.kind.variable()
    }

    pub fn row(&self, arm: Arm) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.arm == arm)
    }

    pub fn adaptive(&self) -> Option<&SweepRow> {
        self.rows.iter().find(|r| matches!(r.arm, Arm::Adaptive(_)))
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean (sample standard deviation over `sqrt(n)`);
/// zero for a single sample.
pub fn stderr(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

fn mean_of(ms: &[SeedMetrics], f: impl Fn(&SeedMetrics) -> f64) -> f64 {
    let xs: Vec<f64> = ms.iter().map(f).collect();
    mean(&xs)
}

/// Worker count from `MINMAX_THREADS`, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs `f` inside a pool sized by `MINMAX_THREADS` (rayon's default
/// otherwise).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Trains one seed of one arm.
pub fn run_arm(
    layout: &GridLayout,
    arm: Arm,
    slip: f64,
    cfg: &LearnerConfig,
) -> Result<TrainingRun, ExperimentError> {
    let (sp, mode) = match arm {
        Arm::Fixed(p) => (slip, UnsafeReward::Fixed(p)),
        Arm::Adaptive(sp) => (sp, UnsafeReward::Learned),
    };
    let mdp = build_gridworld(&GridSpec::new(layout.clone(), sp))?;
    Ok(train(&mdp, cfg, mode, |_| {})?)
}

/// Fans every (arm, seed) pair out to the worker pool. Results come back in
/// arm order, then seed order, whatever the thread count.
pub fn run_grid_sweep(cfg: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    cfg.validate()?;
    let arms = cfg.arms();
    let seeds = cfg.seed_list();
    // build each environment once up front so layout errors surface early
    for arm in &arms {
        let sp = match *arm {
            Arm::Fixed(_) => cfg.slip,
            Arm::Adaptive(sp) => sp,
        };
        build_gridworld(&GridSpec::new(cfg.layout.clone(), sp))?;
    }
    let jobs: Vec<(usize, u64)> = (0..arms.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let metrics: Vec<SeedMetrics> = with_pool(|| {
        jobs.par_iter()
            .map(|&(i, seed)| {
                let learner = cfg.learner.with_seed(seed);
                run_arm(&cfg.layout, arms[i], cfg.slip, &learner)
                    .map(|run| SeedMetrics::from_run(seed, &run))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let rows = arms
        .iter()
        .zip(metrics.chunks(seeds.len()))
        .map(|(&arm, chunk)| SweepRow::aggregate(arm, chunk.to_vec()))
        .collect();
    Ok(SweepResult {
        kind: cfg.kind,
        seeds,
        rows,
    })
}
