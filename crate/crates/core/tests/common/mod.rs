//! Independent oracles: plain fixed-point iteration on the induced Markov
//! chain and brute force over every action vector. Nothing here calls the
//! library's solvers.

#![allow(dead_code)]

use minmax_penalty::TabularMdp;

pub const ORACLE_TOL: f64 = 1e-15;
const ORACLE_CAP: usize = 5_000_000;

/// Per-state results of iterating one policy's chain to a fixed point.
#[derive(Debug, Clone)]
pub struct ChainEval {
    pub safe: Vec<f64>,
    pub unsafe_: Vec<f64>,
    pub hit: Vec<f64>,
    pub value: Vec<f64>,
}

impl ChainEval {
    pub fn proper(&self, mdp: &TabularMdp) -> bool {
        mdp.internal_states()
            .iter()
            .all(|&s| self.safe[s] + self.unsafe_[s] >= 1.0 - 1e-9)
    }
}

/// Gauss-Jacobi iteration of `x = b + P x` for every quantity at once.
/// Hit times and values are only meaningful for proper policies.
pub fn iterate_policy(mdp: &TabularMdp, actions: &[usize]) -> ChainEval {
    let n = mdp.num_states();
    let mut safe = vec![0.0; n];
    let mut unsafe_ = vec![0.0; n];
    let mut hit = vec![0.0; n];
    let mut value = vec![0.0; n];
    for s in 0..n {
        if mdp.is_goal(s) {
            safe[s] = if mdp.is_unsafe(s) { 0.0 } else { 1.0 };
            unsafe_[s] = 1.0 - safe[s];
        }
    }
    for _ in 0..ORACLE_CAP {
        let mut change: f64 = 0.0;
        let mut prob_change: f64 = 0.0;
        let (mut ns, mut nu, mut nh, mut nv) =
            (safe.clone(), unsafe_.clone(), hit.clone(), value.clone());
        for s in 0..n {
            if mdp.is_goal(s) {
                continue;
            }
            let a = actions[s];
            let (mut x, mut y, mut t, mut v) = (0.0, 0.0, 1.0, 0.0);
            for next in 0..n {
                let p = mdp.transition(s, a, next);
                if p == 0.0 {
                    continue;
                }
                x += p * safe[next];
                y += p * unsafe_[next];
                t += p * hit[next];
                v += p * (mdp.reward(s, a, next) + value[next]);
            }
            prob_change = prob_change
                .max((x - safe[s]).abs())
                .max((y - unsafe_[s]).abs());
            change = change
                .max((x - safe[s]).abs())
                .max((y - unsafe_[s]).abs())
                .max((t - hit[s]).abs() / t.max(1.0))
                .max((v - value[s]).abs() / v.abs().max(1.0));
            ns[s] = x;
            nu[s] = y;
            nh[s] = t;
            nv[s] = v;
        }
        safe = ns;
        unsafe_ = nu;
        hit = nh;
        value = nv;
        if change < ORACLE_TOL {
            break;
        }
        // absorption has settled short of 1: improper, times diverge
        let leaking = (0..n).any(|s| !mdp.is_goal(s) && safe[s] + unsafe_[s] < 1.0 - 1e-9);
        if prob_change < ORACLE_TOL && leaking {
            break;
        }
    }
    ChainEval {
        safe,
        unsafe_,
        hit,
        value,
    }
}

/// Every action vector over all states, goal entries pinned to 0.
pub fn all_action_vectors(mdp: &TabularMdp) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; mdp.num_states()]];
    for &s in mdp.internal_states() {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..mdp.num_actions()).map(move |a| {
                    let mut w = v.clone();
                    w[s] = a;
                    w
                })
            })
            .collect();
    }
    out
}

/// Brute-force C (min over distinct pairs of max over states), D and the
/// per-state optimal safe probability over proper policies.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub proper: Vec<(Vec<usize>, ChainEval)>,
    pub controllability: f64,
    pub diameter: f64,
    pub optimal_safe: Vec<f64>,
}

pub fn brute_force(mdp: &TabularMdp) -> BruteForce {
    let proper: Vec<(Vec<usize>, ChainEval)> = all_action_vectors(mdp)
        .into_iter()
        .map(|a| {
            let e = iterate_policy(mdp, &a);
            (a, e)
        })
        .filter(|(_, e)| e.proper(mdp))
        .collect();
    let internal = mdp.internal_states();
    let mut c = f64::INFINITY;
    for i in 0..proper.len() {
        for j in i + 1..proper.len() {
            let gap = internal
                .iter()
                .map(|&s| (proper[i].1.safe[s] - proper[j].1.safe[s]).abs())
                .fold(0.0, f64::max);
            if gap > 1e-9 {
                c = c.min(gap);
            }
        }
    }
    if !c.is_finite() {
        c = 0.0;
    }
    let diameter = proper
        .iter()
        .flat_map(|(_, e)| internal.iter().map(move |&s| e.hit[s]))
        .fold(0.0, f64::max);
    let mut optimal_safe = vec![0.0; mdp.num_states()];
    for (_, e) in &proper {
        for &s in internal {
            optimal_safe[s] = f64::max(optimal_safe[s], e.safe[s]);
        }
    }
    BruteForce {
        proper,
        controllability: c,
        diameter,
        optimal_safe,
    }
}

/// Bounds widened to include the zero absorbing reward, recomputed from
/// the raw tensors.
pub fn bounds_with_zero(mdp: &TabularMdp) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for &s in mdp.internal_states() {
        for a in 0..mdp.num_actions() {
            for next in 0..mdp.num_states() {
                if mdp.transition(s, a, next) > 0.0 {
                    lo = lo.min(mdp.reward(s, a, next));
                    hi = hi.max(mdp.reward(s, a, next));
                }
            }
        }
    }
    (lo, hi)
}

/// Best value per state over proper action vectors, with unsafe entries
/// paying `u`.
pub fn best_values(mdp: &TabularMdp, u: f64) -> Vec<f64> {
    let shaped = mdp.with_unsafe_reward(u).unwrap();
    let mut best = vec![f64::NEG_INFINITY; mdp.num_states()];
    for a in all_action_vectors(&shaped) {
        let e = iterate_policy(&shaped, &a);
        if !e.proper(&shaped) {
            continue;
        }
        for &s in shaped.internal_states() {
            best[s] = best[s].max(e.value[s]);
        }
    }
    best
}
