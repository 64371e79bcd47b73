use crate::error::AnalysisError;
use crate::mdp::{DetPolicy, TabularMdp};

#[derive(Debug, Clone, Copy)]
pub struct ViOptions {
    /// Stop once the max-norm change of a sweep falls below this.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Action values within this of the best count as tied; ties go to the
    /// lowest action index.
    pub tie_tolerance: f64,
}

impl Default for ViOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_sweeps: 1_000_000,
            tie_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ViSolution {
    pub policy: DetPolicy,
    /// Optimal values indexed by state (0 at goals).
    pub values: Vec<f64>,
    pub sweeps: usize,
    pub residual: f64,
}

fn q_value(mdp: &TabularMdp, values: &[f64], s: usize, a: usize) -> f64 {
    mdp.row(s, a)
        .iter()
        .zip(mdp.reward_row(s, a))
        .zip(values)
        .filter(|((&p, _), _)| p > 0.0)
        .map(|((&p, &r), &v)| p * (r + v))
        .sum()
}

/// Undiscounted Bellman optimality sweeps on `mdp` as given.
pub fn solve(mdp: &TabularMdp, opts: ViOptions) -> Result<ViSolution, AnalysisError> {
    let n = mdp.num_states();
    let mut values = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        residual = 0.0;
        for &s in mdp.internal_states() {
            let best = (0..mdp.num_actions())
                .map(|a| q_value(mdp, &values, s, a))
                .fold(f64::NEG_INFINITY, f64::max);
            residual = residual.max((best - values[s]).abs());
            next[s] = best;
        }
        std::mem::swap(&mut values, &mut next);
        if !residual.is_finite() {
            break;
        }
        if residual < opts.tolerance {
            let policy = greedy_policy(mdp, &values, opts.tie_tolerance);
            return Ok(ViSolution {
                policy,
                values,
                sweeps,
                residual,
            });
        }
    }
    Err(AnalysisError::NotConverged {
        iterations: sweeps,
        residual,
    })
}

/// Greedy policy with respect to `values`, lowest index on ties.
pub fn greedy_policy(mdp: &TabularMdp, values: &[f64], tie_tolerance: f64) -> DetPolicy {
    let mut actions = vec![0; mdp.num_states()];
    for &s in mdp.internal_states() {
        let qs: Vec<f64> = (0..mdp.num_actions())
            .map(|a| q_value(mdp, values, s, a))
            .collect();
        let best = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        actions[s] = qs
            .iter()
            .position(|&q| q >= best - tie_tolerance)
            .unwrap_or(0);
    }
    DetPolicy::new(mdp, actions).expect("greedy actions are in range")
}

/// Optimal policy and values when every transition into an unsafe goal pays
/// `unsafe_reward`.
pub fn value_iteration(mdp: &TabularMdp, unsafe_reward: f64) -> Result<ViSolution, AnalysisError> {
    value_iteration_with(mdp, unsafe_reward, ViOptions::default())
}

pub fn value_iteration_with(
    mdp: &TabularMdp,
    unsafe_reward: f64,
    opts: ViOptions,
) -> Result<ViSolution, AnalysisError> {
    solve(&mdp.with_unsafe_reward(unsafe_reward)?, opts)
}
