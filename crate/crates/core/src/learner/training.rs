//! Episodic training loop: epsilon-greedy Q-learning where every transition
//! into an unsafe goal pays either the online Minmax estimate or a fixed
//! hand-set penalty.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::evaluate_policy;
use crate::error::LearnerError;
use crate::learner::estimate::MinmaxEstimate;
use crate::learner::qlearning::{q_learning_step, QTable};
use crate::mdp::{DetPolicy, TabularMdp};

/// Episodes the greedy policy must stay unchanged to count as converged.
pub const CONVERGENCE_WINDOW: usize = 500;
/// Trailing episodes used for converged metrics.
pub const TAIL_EPISODES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnerConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub episodes: usize,
    pub step_cap: usize,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            alpha: 0.1,
            episodes: 10_000,
            step_cap: 1_000,
            seed: 0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), LearnerError> {
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x <= 1.0 {
                Ok(())
            } else {
                Err(LearnerError::Config(format!(
                    "{name} = {x} must lie in (0, 1]"
                )))
            }
        };
        unit("epsilon", self.epsilon)?;
        unit("alpha", self.alpha)?;
        if self.step_cap == 0 {
            return Err(LearnerError::Config("step_cap must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn from_toml(text: &str) -> Result<Self, LearnerError> {
        let cfg: Self = toml::from_str(text).map_err(|e| LearnerError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reward paid on transitions into unsafe goals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnsafeReward {
    /// The running Minmax estimate.
    Learned,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    SafeGoal,
    Unsafe,
    StepCap,
}

impl Terminal {
    pub fn is_failure(self) -> bool {
        !matches!(self, Terminal::SafeGoal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub episode: usize,
    /// Undiscounted environment return (before any penalty substitution).
    #[serde(rename = "return")]
    pub total_return: f64,
    pub steps: usize,
    pub terminal: Terminal,
    /// Unsafe-entry reward in force at the end of the episode.
    pub penalty: f64,
}

/// Everything the loop knows about one environment step.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    pub episode: usize,
    pub t: usize,
    pub state: usize,
    pub action: usize,
    pub next_state: usize,
    pub env_reward: f64,
    /// Reward the Q update actually used.
    pub learner_reward: f64,
    /// `max_a q(state, a)` before the update.
    pub state_value: f64,
    pub estimate: MinmaxEstimate,
    pub entered_unsafe: bool,
}

#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub q: QTable,
    pub estimate: MinmaxEstimate,
    pub logs: Vec<EpisodeLog>,
    pub total_steps: u64,
    /// Cumulative steps up to the first episode after which the greedy policy
    /// stayed fixed for [`CONVERGENCE_WINDOW`] episodes.
    pub steps_to_convergence: Option<u64>,
    /// Mean over the trailing episodes of the exact failure probability (from
    /// the initial state) of the greedy policy held at the end of each.
    pub converged_failure_rate: f64,
    /// Fraction of the trailing behaviour episodes that failed.
    pub behaviour_failure_rate: f64,
    /// Mean environment return over the trailing episodes.
    pub mean_return: f64,
    pub greedy_policy: DetPolicy,
}

impl TrainingRun {
    /// Penalty in force at the end of training.
    pub fn final_penalty(&self) -> f64 {
        self.logs
            .last()
            .map_or(self.estimate.penalty, |l| l.penalty)
    }
}

/// Online-penalty learner with default settings and no step observer.
pub fn run_training(mdp: &TabularMdp, cfg: &LearnerConfig) -> Result<TrainingRun, LearnerError> {
    train(mdp, cfg, UnsafeReward::Learned, |_| {})
}

/// Baseline arm: the unsafe reward is pinned to `penalty`.
pub fn run_fixed_penalty(
    mdp: &TabularMdp,
    penalty: f64,
    cfg: &LearnerConfig,
) -> Result<TrainingRun, LearnerError> {
    if !penalty.is_finite() {
        return Err(LearnerError::NonFinite {
            reward: penalty,
            value: 0.0,
        });
    }
    train(mdp, cfg, UnsafeReward::Fixed(penalty), |_| {})
}

/// The training loop. `observer` sees every step after the Q update.
pub fn train(
    mdp: &TabularMdp,
    cfg: &LearnerConfig,
    unsafe_reward: UnsafeReward,
    mut observer: impl FnMut(&StepRecord),
) -> Result<TrainingRun, LearnerError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut q = QTable::zeros(mdp.num_states(), mdp.num_actions());
    let mut est = MinmaxEstimate::new();
    let mut logs = Vec::with_capacity(cfg.episodes);
    let mut total_steps: u64 = 0;

    let tail_start = cfg.episodes.saturating_sub(TAIL_EPISODES);
    let mut tail_failure_sum = 0.0;
    let mut cached: Option<(DetPolicy, f64)> = None;

    let mut current_policy: Option<DetPolicy> = None;
    let mut stable_since_steps: u64 = 0;
    let mut stable_since_episode: usize = 0;
    let mut steps_to_convergence = None;

    for episode in 0..cfg.episodes {
        let mut s = mdp.initial_state();
        let mut ret = 0.0;
        let mut steps = 0;
        let terminal = loop {
            if steps == cfg.step_cap {
                break Terminal::StepCap;
            }
            let a = q.epsilon_greedy(s, cfg.epsilon, &mut rng);
            let (next, r) = mdp.sample_step(s, a, &mut rng)?;
            let state_value = q.state_value(s);
            let prev_penalty = est.penalty;
            est = est.update(r, state_value)?;
            debug_assert!(est.penalty <= prev_penalty);
            let entered_unsafe = mdp.is_unsafe(next);
            let learner_reward = if entered_unsafe {
                match unsafe_reward {
                    UnsafeReward::Learned => est.penalty,
                    UnsafeReward::Fixed(p) => p,
                }
            } else {
                r
            };
            q_learning_step(&mut q, mdp, s, a, next, learner_reward, cfg.alpha);
            observer(&StepRecord {
                episode,
                t: steps,
                state: s,
                action: a,
                next_state: next,
                env_reward: r,
                learner_reward,
                state_value,
                estimate: est,
                entered_unsafe,
            });
            ret += r;
            steps += 1;
            s = next;
            if mdp.is_goal(s) {
                break if entered_unsafe {
                    Terminal::Unsafe
                } else {
                    Terminal::SafeGoal
                };
            }
        };
        total_steps += steps as u64;
        logs.push(EpisodeLog {
            episode,
            total_return: ret,
            steps,
            terminal,
            penalty: match unsafe_reward {
                UnsafeReward::Learned => est.penalty,
                UnsafeReward::Fixed(p) => p,
            },
        });

        let policy = q.greedy_policy(mdp);
        if current_policy.as_ref() != Some(&policy) {
            current_policy = Some(policy.clone());
            stable_since_episode = episode;
            stable_since_steps = total_steps;
        } else if steps_to_convergence.is_none()
            && episode - stable_since_episode >= CONVERGENCE_WINDOW
        {
            steps_to_convergence = Some(stable_since_steps);
        }

        if episode >= tail_start {
            let failure = match &cached {
                Some((p, f)) if *p == policy => *f,
                _ => {
                    let f = evaluate_policy(mdp, &policy).failure_prob(mdp.initial_state());
                    cached = Some((policy.clone(), f));
                    f
                }
            };
            tail_failure_sum += failure;
        }
    }

    let tail: &[EpisodeLog] = &logs[tail_start..];
    let n_tail = tail.len().max(1) as f64;
    let behaviour_failure_rate =
        tail.iter().filter(|l| l.terminal.is_failure()).count() as f64 / n_tail;
    let mean_return = tail.iter().map(|l| l.total_return).sum::<f64>() / n_tail;
    Ok(TrainingRun {
        greedy_policy: q.greedy_policy(mdp),
        q,
        estimate: est,
        logs,
        total_steps,
        steps_to_convergence,
        converged_failure_rate: tail_failure_sum / n_tail,
        behaviour_failure_rate,
        mean_return,
    })
}

/// Writes episode logs as `episode,return,steps,terminal,penalty`.
pub fn write_episode_csv<W: std::io::Write>(logs: &[EpisodeLog], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for log in logs {
        w.serialize(log)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::chain_walk;
    use crate::envs::chain_walk_ids::*;

    fn small() -> LearnerConfig {
        LearnerConfig {
            episodes: 2_000,
            ..LearnerConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(LearnerConfig::default().validate().is_ok());
        assert!(LearnerConfig {
            epsilon: 0.0,
            ..LearnerConfig::default()
        }
        .validate()
        .is_err());
        assert!(LearnerConfig {
            alpha: 1.5,
            ..LearnerConfig::default()
        }
        .validate()
        .is_err());
        let cfg = LearnerConfig::from_toml("episodes = 50\nseed = 3\n").unwrap();
        assert_eq!(cfg.episodes, 50);
        assert_eq!(cfg.epsilon, 0.1);
        assert!(LearnerConfig::from_toml("episods = 50").is_err());
    }

    #[test]
    fn chain_walk_estimate_tracks_the_lowest_value() {
        // rewards are all -1, so v_max never leaves 0 and the penalty is v_min
        let mdp = chain_walk(0.0).unwrap();
        let mut steps = 0;
        let run = train(&mdp, &small(), UnsafeReward::Learned, |rec| {
            steps += 1;
            assert_eq!(rec.estimate.v_max, 0.0);
            assert_eq!(rec.estimate.penalty, rec.estimate.v_min.min(-1.0));
            // greedy values on the chain walk never drop below -2
            assert!(rec.estimate.penalty >= -2.0);
        })
        .unwrap();
        assert_eq!(steps, run.total_steps);
        assert_eq!(run.final_penalty(), run.estimate.penalty);
    }

    #[test]
    fn fixed_small_penalty_learns_the_unsafe_action() {
        let mdp = chain_walk(0.0).unwrap();
        let run = run_fixed_penalty(&mdp, -1.0, &small()).unwrap();
        assert_eq!(run.greedy_policy.action(S0), A2);
        assert_eq!(run.converged_failure_rate, 1.0);
        assert!(run.logs.iter().all(|l| l.penalty == -1.0));
    }

    #[test]
    fn logs_are_consistent() {
        let mdp = chain_walk(0.25).unwrap();
        let cfg = LearnerConfig {
            episodes: 300,
            step_cap: 3,
            ..LearnerConfig::default()
        };
        let run = run_training(&mdp, &cfg).unwrap();
        assert_eq!(run.logs.len(), 300);
        assert!(run.logs.iter().all(|l| l.steps <= 3));
        assert_eq!(
            run.total_steps,
            run.logs.iter().map(|l| l.steps as u64).sum::<u64>()
        );
        // every step pays -1, so the return is minus the length
        for l in &run.logs {
            assert_eq!(l.total_return, -(l.steps as f64));
            if l.terminal == Terminal::StepCap {
                assert_eq!(l.steps, 3);
            }
        }
    }

    #[test]
    fn episode_csv_header() {
        let mdp = chain_walk(0.0).unwrap();
        let run = run_training(
            &mdp,
            &LearnerConfig {
                episodes: 2,
                ..LearnerConfig::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_episode_csv(&run.logs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("episode,return,steps,terminal,penalty\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
