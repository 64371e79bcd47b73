//! Seeded random MDPs for property suites.

use rand::Rng;

use crate::analysis::safety::{minmax_penalty, SafetyAnalysis};
use crate::mdp::{MdpBuilder, TabularMdp};

#[derive(Debug, Clone, Copy)]
pub struct RandomMdpConfig {
    pub max_internal: usize,
    pub max_actions: usize,
    /// Rewards drawn uniformly from `[-reward_scale, reward_scale]`.
    pub reward_scale: f64,
}

impl Default for RandomMdpConfig {
    fn default() -> Self {
        Self {
            max_internal: 6,
            max_actions: 3,
            reward_scale: 1.0,
        }
    }
}

/// Dense random MDP: internal states `0..n`, safe goal `n`, unsafe goal
/// `n + 1`. Every row puts positive mass on every state, so both goals are
/// reachable from everywhere and every policy is proper.
pub fn random_mdp<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomMdpConfig) -> TabularMdp {
    let n = rng.gen_range(1..=cfg.max_internal);
    let actions = rng.gen_range(2..=cfg.max_actions.max(2));
    let total = n + 2;
    let mut b = MdpBuilder::new(total, actions);
    for s in 0..n {
        for a in 0..actions {
            let weights: Vec<f64> = (0..total).map(|_| rng.gen_range(0.01..1.0)).collect();
            let sum: f64 = weights.iter().sum();
            for (t, w) in weights.into_iter().enumerate() {
                let r = rng.gen_range(-cfg.reward_scale..=cfg.reward_scale);
                b.arc(s, a, t, w / sum, r).expect("indices in range");
            }
        }
    }
    b.goals([n, n + 1]).unsafe_goals([n + 1]).initial_state(0);
    b.build().expect("random rows are stochastic")
}

/// Rejection-samples [`random_mdp`] until controllability exceeds `min_c`.
pub fn random_controllable_mdp<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &RandomMdpConfig,
    min_c: f64,
) -> (TabularMdp, SafetyAnalysis) {
    loop {
        let mdp = random_mdp(rng, cfg);
        if let Ok(analysis) = minmax_penalty(&mdp) {
            if analysis.controllability > min_c {
                return (mdp, analysis);
            }
        }
    }
}
