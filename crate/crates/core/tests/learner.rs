//! Learner invariants checked step by step through the training observer.

use minmax_penalty::envs::chain_walk_ids::{A1, S0};
use minmax_penalty::envs::{build_gridworld, chain_walk, GridSpec};
use minmax_penalty::learner::{
    run_fixed_penalty, run_training, train, write_episode_csv, LearnerConfig, MinmaxEstimate,
    StepRecord, Terminal, UnsafeReward,
};

fn record(
    mdp: &minmax_penalty::TabularMdp,
    cfg: &LearnerConfig,
    mode: UnsafeReward,
) -> Vec<StepRecord> {
    let mut steps = Vec::new();
    train(mdp, cfg, mode, |s| steps.push(*s)).unwrap();
    steps
}

#[test]
fn estimate_is_a_pure_fold_of_the_observations() {
    let mdp = build_gridworld(&GridSpec::default()).unwrap();
    let cfg = LearnerConfig {
        episodes: 300,
        ..Default::default()
    };
    let steps = record(&mdp, &cfg, UnsafeReward::Learned);
    let mut folded = MinmaxEstimate::new();
    for (i, step) in steps.iter().enumerate() {
        folded = folded.update(step.env_reward, step.state_value).unwrap();
        assert_eq!(folded, step.estimate, "step {i}");
    }
    // spot-check a prefix against a fresh fold
    let prefix =
        MinmaxEstimate::fold(steps[..100].iter().map(|s| (s.env_reward, s.state_value))).unwrap();
    assert_eq!(prefix, steps[99].estimate);
}

#[test]
fn unsafe_entries_see_the_current_penalty() {
    let mdp = build_gridworld(&GridSpec::default()).unwrap();
    let cfg = LearnerConfig {
        episodes: 500,
        ..Default::default()
    };
    let steps = record(&mdp, &cfg, UnsafeReward::Learned);
    let unsafe_steps: Vec<_> = steps.iter().filter(|s| s.entered_unsafe).collect();
    assert!(!unsafe_steps.is_empty());
    for s in unsafe_steps {
        assert_eq!(s.learner_reward, s.estimate.penalty);
    }
    for s in steps.iter().filter(|s| !s.entered_unsafe) {
        assert_eq!(s.learner_reward, s.env_reward);
    }
}

#[test]
fn non_positive_rewards_keep_v_max_at_zero() {
    for p in [0.0, 0.1, 0.25] {
        let mdp = chain_walk(p).unwrap();
        let cfg = LearnerConfig {
            episodes: 3_000,
            seed: 3,
            ..Default::default()
        };
        for s in record(&mdp, &cfg, UnsafeReward::Learned) {
            assert_eq!(s.estimate.v_max, 0.0);
            assert_eq!(s.estimate.penalty, s.estimate.v_min);
        }
    }
}

#[test]
fn identical_seeds_give_identical_logs() {
    let mdp = build_gridworld(&GridSpec::default()).unwrap();
    let cfg = LearnerConfig {
        episodes: 1_500,
        seed: 99,
        ..Default::default()
    };
    let csv = |run: &minmax_penalty::learner::TrainingRun| {
        let mut buf = Vec::new();
        write_episode_csv(&run.logs, &mut buf).unwrap();
        buf
    };
    let a = run_training(&mdp, &cfg).unwrap();
    let b = run_training(&mdp, &cfg).unwrap();
    assert_eq!(csv(&a), csv(&b));
    let c = run_training(&mdp, &cfg.with_seed(100)).unwrap();
    assert_ne!(csv(&a), csv(&c));
}

#[test]
fn episode_logs_are_consistent() {
    let mdp = build_gridworld(&GridSpec::default()).unwrap();
    let cfg = LearnerConfig {
        episodes: 400,
        step_cap: 30,
        ..Default::default()
    };
    let run = run_training(&mdp, &cfg).unwrap();
    assert!(run.logs.iter().any(|l| l.terminal == Terminal::StepCap));
    for log in &run.logs {
        assert!(log.steps <= cfg.step_cap);
        if log.terminal == Terminal::StepCap {
            assert_eq!(log.steps, cfg.step_cap);
        }
    }
    assert_eq!(
        run.total_steps,
        run.logs.iter().map(|l| l.steps as u64).sum::<u64>()
    );
}

#[test]
fn frozen_penalty_on_chain_walk_learns_the_safe_action() {
    let mdp = chain_walk(0.0).unwrap();
    let run = run_fixed_penalty(&mdp, -3.0, &LearnerConfig::default()).unwrap();
    assert_eq!(run.greedy_policy.action(S0), A1);
    assert_eq!(run.converged_failure_rate, 0.0);
}

#[test]
fn refixing_the_learned_penalty_reproduces_the_failure_rate() {
    let mdp = build_gridworld(&GridSpec::default()).unwrap();
    let seeds = 0..70u64;
    let (mut adaptive, mut refixed) = (0.0, 0.0);
    for seed in seeds.clone() {
        let cfg = LearnerConfig::default().with_seed(seed);
        let run = run_training(&mdp, &cfg).unwrap();
        adaptive += run.converged_failure_rate;
        refixed += run_fixed_penalty(&mdp, run.final_penalty(), &cfg)
            .unwrap()
            .converged_failure_rate;
    }
    let n = seeds.count() as f64;
    assert!(
        (adaptive / n - refixed / n).abs() < 0.02,
        "{} vs {}",
        adaptive / n,
        refixed / n
    );
}
