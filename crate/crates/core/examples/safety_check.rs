//! Random controllable MDPs: any unsafe reward below the Minmax penalty makes
//! the optimal policy also the safest one.
//!
//!     cargo run --release --example safety_check [count]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minmax_penalty::analysis::random::{random_controllable_mdp, RandomMdpConfig};
use minmax_penalty::analysis::{evaluate_policy, value_iteration};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map_or(Ok(100), |s| s.parse())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = RandomMdpConfig::default();
    let mut violations = 0;
    for k in 0..count {
        let (mdp, analysis) = random_controllable_mdp(&mut rng, &cfg, 0.05);
        let sol = value_iteration(&mdp, analysis.minmax_penalty - 0.01)?;
        let eval = evaluate_policy(&mdp, &sol.policy);
        let gap = mdp
            .internal_states()
            .iter()
            .map(|&s| analysis.optimal_safe_prob[s] - eval.safe_prob[s])
            .fold(0.0, f64::max);
        if gap > 1e-9 {
            violations += 1;
            println!("mdp {k}: safe probability short by {gap:e}");
        }
    }
    println!("{count} MDPs, {violations} violations");
    Ok(())
}
