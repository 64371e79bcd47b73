//! One run of Q-learning that learns the lava penalty online, with the
//! estimate traced every 1000 episodes.
//!
//!     cargo run --release --example learn_penalty [slip] [seed]

use minmax_penalty::envs::{build_gridworld, GridSpec};
use minmax_penalty::learner::{run_fixed_penalty, train, LearnerConfig, UnsafeReward};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let sp: f64 = args.next().map_or(Ok(0.25), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(0), |s| s.parse())?;
    let mdp = build_gridworld(&GridSpec::default().with_slip(sp))?;
    let cfg = LearnerConfig::default().with_seed(seed);

    let mut last_episode = usize::MAX;
    let run = train(&mdp, &cfg, UnsafeReward::Learned, |step| {
        if step.episode % 1000 == 0 && step.episode != last_episode {
            last_episode = step.episode;
            let e = step.estimate;
            println!(
                "episode {:>5}: r in [{:.2}, {:.2}], v in [{:.3}, {:.3}], penalty {:.3}",
                step.episode, e.r_min_obs, e.r_max_obs, e.v_min, e.v_max, e.penalty
            );
        }
    })?;
    println!(
        "learned: penalty {:.3}, failure {:.4}, converged after {:?} steps",
        run.final_penalty(),
        run.converged_failure_rate,
        run.steps_to_convergence
    );

    for penalty in [0.0, -1.0, -5.0] {
        let fixed = run_fixed_penalty(&mdp, penalty, &cfg)?;
        println!(
            "fixed {penalty:>4}: failure {:.4}, converged after {:?} steps",
            fixed.converged_failure_rate, fixed.steps_to_convergence
        );
    }
    Ok(())
}
