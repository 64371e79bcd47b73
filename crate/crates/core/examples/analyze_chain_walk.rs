//! Controllability, diameter and Minmax penalty of the chain walk across `p`.
//!
//!     cargo run --example analyze_chain_walk

use minmax_penalty::analysis::{delta_p, minmax_penalty, ControllabilityVariant};
use minmax_penalty::envs::chain_walk;
use minmax_penalty::envs::chain_walk_ids::{A1, A2, S0, S2};
use minmax_penalty::DetPolicy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>5} {:>8} {:>8} {:>6} {:>10}",
        "p", "dP(s0)", "C", "D", "penalty"
    );
    for p in [0.0, 0.1, 0.25, 0.4, 0.5, 0.75, 1.0] {
        let mdp = chain_walk(p)?;
        let pi1 = DetPolicy::constant(&mdp, A1)?;
        let pi2 = DetPolicy::constant(&mdp, A2)?;
        let dp = delta_p(&mdp, &pi1, &pi2, S0);
        debug_assert_eq!(delta_p(&mdp, &pi1, &pi2, S2), 0.0);
        match minmax_penalty(&mdp) {
            Ok(a) => println!(
                "{p:>5} {dp:>8.4} {:>8.4} {:>6.3} {:>10.4}",
                a.controllability, a.diameter, a.minmax_penalty
            ),
            Err(e) => println!("{p:>5} {dp:>8.4}   {e}"),
        }
    }

    // the other reading of controllability collapses to 0 on the chain walk
    let mdp = chain_walk(0.25)?;
    let opts = minmax_penalty::analysis::AnalysisOptions {
        variant: ControllabilityVariant::StatesMin,
        ..Default::default()
    };
    match minmax_penalty::analysis::minmax_penalty_with(&mdp, opts) {
        Ok(a) => println!("states-min at p=0.25: C = {}", a.controllability),
        Err(e) => println!("states-min at p=0.25: {e}"),
    }
    Ok(())
}
