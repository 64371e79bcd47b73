//! Builds the lava gridworld and solves it exactly for a range of lava
//! penalties: the penalty needed for a safe policy grows with the slip.
//!
//!     cargo run --example gridworld [map-file]

use minmax_penalty::analysis::{evaluate_policy, value_iteration};
use minmax_penalty::envs::grid::{DOWN, LEFT, RIGHT, UP};
use minmax_penalty::envs::{GridLayout, GridSpec, GridWorld};

fn arrow(a: usize) -> char {
    match a {
        UP => '^',
        DOWN => 'v',
        LEFT => '<',
        RIGHT => '>',
        _ => '?',
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let layout = match std::env::args().nth(1) {
        Some(path) => GridLayout::parse(&std::fs::read_to_string(path)?)?,
        None => GridLayout::default(),
    };
    print!("{layout}");
    for sp in [0.0, 0.25, 0.5] {
        let world = GridWorld::build(&GridSpec::new(layout.clone(), sp))?;
        let mdp = &world.mdp;
        println!(
            "\nslip {sp}: {} states, bounds {:?}",
            mdp.num_states(),
            mdp.reward_bounds()
        );
        for u in [0.0, -0.5, -1.0, -2.0, -5.0] {
            let sol = value_iteration(mdp, u)?;
            let failure = evaluate_policy(mdp, &sol.policy).failure_prob(mdp.initial_state());
            println!("  lava reward {u:>4}: failure from start {failure:.4}");
        }
        let sol = value_iteration(mdp, -5.0)?;
        for r in 0..layout.rows() {
            let line: String = (0..layout.cols())
                .map(|c| match world.state_at((r, c)) {
                    Some(s) => arrow(sol.policy.action(s)),
                    None => layout.cell(r, c).to_char(),
                })
                .collect();
            println!("  {line}");
        }
    }
    Ok(())
}
