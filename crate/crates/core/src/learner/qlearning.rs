use rand::Rng;

use crate::mdp::{DetPolicy, TabularMdp};

/// Tabular action values, zero-initialised.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    values: Vec<f64>,
    num_actions: usize,
}

impl QTable {
    pub fn zeros(num_states: usize, num_actions: usize) -> Self {
        Self {
            values: vec![0.0; num_states * num_actions],
            num_actions,
        }
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    #[inline]
    pub fn get(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.num_actions + a]
    }

    #[inline]
    pub fn set(&mut self, s: usize, a: usize, v: f64) {
        self.values[s * self.num_actions + a] = v;
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.num_actions..(s + 1) * self.num_actions]
    }

    /// `max_a q(s, a)`.
    pub fn state_value(&self, s: usize) -> f64 {
        self.row(s)
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Greedy action, lowest index on ties.
    pub fn greedy_action(&self, s: usize) -> usize {
        let row = self.row(s);
        let best = self.state_value(s);
        row.iter().position(|&q| q == best).unwrap_or(0)
    }

    /// Greedy action, uniformly random among exact ties.
    pub fn greedy_action_random_ties<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> usize {
        let row = self.row(s);
        let best = self.state_value(s);
        let ties = row.iter().filter(|&&q| q == best).count();
        if ties <= 1 {
            return self.greedy_action(s);
        }
        let k = rng.gen_range(0..ties);
        row.iter()
            .enumerate()
            .filter(|&(_, &q)| q == best)
            .nth(k)
            .map(|(a, _)| a)
            .unwrap_or(0)
    }

    pub fn epsilon_greedy<R: Rng + ?Sized>(&self, s: usize, epsilon: f64, rng: &mut R) -> usize {
        if rng.gen::<f64>() < epsilon {
            rng.gen_range(0..self.num_actions)
        } else {
            self.greedy_action_random_ties(s, rng)
        }
    }

    /// Greedy deterministic policy over the internal states of `mdp`.
    pub fn greedy_policy(&self, mdp: &TabularMdp) -> DetPolicy {
        let actions = (0..mdp.num_states())
            .map(|s| self.greedy_action(s))
            .collect();
        DetPolicy::new(mdp, actions).expect("table matches the MDP")
    }
}

/// One Q-learning backup. Absorbing successors contribute no future value.
pub fn q_learning_step(
    q: &mut QTable,
    mdp: &TabularMdp,
    s: usize,
    a: usize,
    next: usize,
    reward: f64,
    alpha: f64,
) {
    let future = if mdp.is_goal(next) {
        0.0
    } else {
        q.state_value(next)
    };
    let old = q.get(s, a);
    q.set(s, a, old + alpha * (reward + future - old));
}
