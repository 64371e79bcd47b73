use crate::analysis::linalg::Solver;
use crate::error::AnalysisError;
use crate::mdp::{DetPolicy, TabularMdp, PROB_TOLERANCE};

/// Exact quantities of the Markov chain induced by one deterministic policy.
///
/// All vectors are indexed by state. At goals, `safe_prob` is 1 (safe) or 0
/// (unsafe) and hitting times and values are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyEval {
    /// Probability of terminating in a safe goal.
    pub safe_prob: Vec<f64>,
    /// Probability of terminating in an unsafe goal, solved independently.
    pub unsafe_prob: Vec<f64>,
    /// Expected steps to the first goal; `None` for improper policies.
    pub hit_time: Option<Vec<f64>>,
    /// Undiscounted expected return; `None` for improper policies.
    pub value: Option<Vec<f64>>,
    pub proper: bool,
}

impl PolicyEval {
    pub fn hit_time(&self) -> Result<&[f64], AnalysisError> {
        self.hit_time
            .as_deref()
            .ok_or(AnalysisError::ImproperPolicy)
    }

    pub fn value(&self) -> Result<&[f64], AnalysisError> {
        self.value.as_deref().ok_or(AnalysisError::ImproperPolicy)
    }

    /// `P(s_T in unsafe goals)`, i.e. the failure probability from `state`.
    pub fn failure_prob(&self, state: usize) -> f64 {
        1.0 - self.safe_prob[state]
    }
}

/// Marks internal states from which some goal is reachable with positive
/// probability under `pi`.
pub fn reaches_goal(mdp: &TabularMdp, pi: &DetPolicy) -> Vec<bool> {
    let n = mdp.num_states();
    let mut reach: Vec<bool> = (0..n).map(|s| mdp.is_goal(s)).collect();
    // Fixed point over the induced graph; n is small so a plain sweep is fine.
    loop {
        let mut changed = false;
        for &s in mdp.internal_states() {
            if reach[s] {
                continue;
            }
            if mdp
                .row(s, pi.action(s))
                .iter()
                .enumerate()
                .any(|(t, &p)| p > 0.0 && reach[t])
            {
                reach[s] = true;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// Probability of being absorbed in `target` (a subset of the goals).
pub fn absorption_probability(
    mdp: &TabularMdp,
    pi: &DetPolicy,
    target: impl Fn(usize) -> bool,
) -> Vec<f64> {
    let reach = reaches_goal(mdp, pi);
    let live: Vec<usize> = mdp
        .internal_states()
        .iter()
        .copied()
        .filter(|&s| reach[s])
        .collect();
    let solver = induced_solver(mdp, pi, &live);
    let b: Vec<f64> = live
        .iter()
        .map(|&s| {
            mdp.row(s, pi.action(s))
                .iter()
                .enumerate()
                .filter(|&(t, _)| mdp.is_goal(t) && target(t))
                .map(|(_, &p)| p)
                .sum()
        })
        .collect();
    let x = solver.solve(&b);
    let mut out: Vec<f64> = (0..mdp.num_states())
        .map(|s| {
            if mdp.is_goal(s) && target(s) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for (&s, &v) in live.iter().zip(&x) {
        out[s] = v.clamp(0.0, 1.0);
    }
    out
}

/// `Q` restricted to `states` under `pi`, wrapped in a solver for `I - Q`.
fn induced_solver(mdp: &TabularMdp, pi: &DetPolicy, states: &[usize]) -> Solver {
    let n = states.len();
    let mut pos = vec![usize::MAX; mdp.num_states()];
    for (i, &s) in states.iter().enumerate() {
        pos[s] = i;
    }
    let mut q = vec![0.0; n * n];
    for (i, &s) in states.iter().enumerate() {
        for (t, &p) in mdp.row(s, pi.action(s)).iter().enumerate() {
            if p > 0.0 && pos[t] != usize::MAX {
                q[i * n + pos[t]] = p;
            }
        }
    }
    Solver::new(q, n)
}

/// Evaluates a deterministic policy exactly.
pub fn evaluate_policy(mdp: &TabularMdp, pi: &DetPolicy) -> PolicyEval {
    let safe_prob = absorption_probability(mdp, pi, |g| mdp.is_safe_goal(g));
    let unsafe_prob = absorption_probability(mdp, pi, |g| mdp.is_unsafe(g));
    let reach = reaches_goal(mdp, pi);
    // Structural reachability decides properness; the tolerance guards the
    // solved absorption mass against rows with vanishing exit probability.
    let proper = mdp
        .internal_states()
        .iter()
        .all(|&s| reach[s] && safe_prob[s] + unsafe_prob[s] >= 1.0 - PROB_TOLERANCE);

    let (hit_time, value) = if proper {
        let internal = mdp.internal_states();
        let solver = induced_solver(mdp, pi, internal);
        let ones = vec![1.0; internal.len()];
        let expected_reward: Vec<f64> = internal
            .iter()
            .map(|&s| {
                let a = pi.action(s);
                mdp.row(s, a)
                    .iter()
                    .zip(mdp.reward_row(s, a))
                    .map(|(p, r)| p * r)
                    .sum()
            })
            .collect();
        let t = solver.solve(&ones);
        let v = solver.solve(&expected_reward);
        let mut hit = vec![0.0; mdp.num_states()];
        let mut val = vec![0.0; mdp.num_states()];
        for (i, &s) in internal.iter().enumerate() {
            hit[s] = t[i];
            val[s] = v[i];
        }
        (Some(hit), Some(val))
    } else {
        (None, None)
    };

    PolicyEval {
        safe_prob,
        unsafe_prob,
        hit_time,
        value,
        proper,
    }
}
