//! Undiscounted value iteration with the unsafe-entry reward swept through
//! the p = 0 boundary at -2.
//!
//!     cargo run --example value_iteration

use minmax_penalty::analysis::{evaluate_policy, value_iteration};
use minmax_penalty::envs::chain_walk;
use minmax_penalty::envs::chain_walk_ids::{A1, S0};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mdp = chain_walk(0.0)?;
    for u in [-3.0, -2.01, -2.0, -1.99, -1.0, -0.5] {
        let sol = value_iteration(&mdp, u)?;
        let action = if sol.policy.action(S0) == A1 {
            "a1"
        } else {
            "a2"
        };
        let safe = evaluate_policy(&mdp, &sol.policy).safe_prob[S0];
        println!(
            "u = {u:>6}: pi(s0) = {action}, V(s0) = {:>6.3}, safe = {safe}, sweeps = {}",
            sol.values[S0], sol.sweeps
        );
    }
    Ok(())
}
