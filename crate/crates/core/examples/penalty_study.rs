//! Which unsafe-state penalties make value iteration pick the safe policy on
//! the chain walk, compared against the three derived penalties.
//!
//!     cargo run --example penalty_study

use minmax_penalty::experiment::{chainwalk_penalty_study, write_chainwalk_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let penalties = [-5.0, -4.0, -3.0, -2.01, -2.0, -1.5, -1.0, -0.5, 0.0];
    let study = chainwalk_penalty_study(&[0.0, 0.1, 0.25, 0.4], &penalties)?;
    write_chainwalk_csv(&study, std::io::stdout().lock())?;
    Ok(())
}
