//! Writes an MDP in the text format, reads it back and analyses it.
//!
//!     cargo run --example mdp_file

use minmax_penalty::analysis::minmax_penalty;
use minmax_penalty::format::{read_mdp, write_mdp};
use minmax_penalty::MdpBuilder;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a two-state corridor: state 1 can fall into the pit (3) or reach the exit (2)
    let mut b = MdpBuilder::new(4, 2);
    b.arc(0, 0, 1, 1.0, -1.0)?
        .arc(0, 1, 3, 0.5, -1.0)?
        .arc(0, 1, 1, 0.5, -1.0)?
        .arc(1, 0, 2, 0.9, -1.0)?
        .arc(1, 0, 3, 0.1, -1.0)?
        .arc(1, 1, 3, 0.6, -1.0)?
        .arc(1, 1, 2, 0.4, -1.0)?;
    b.goals([2, 3]).unsafe_goals([3]).initial_state(0);
    let mdp = b.build()?;

    let text = write_mdp(&mdp);
    print!("{text}");
    let back = read_mdp(&text)?;
    assert_eq!(back, mdp);

    let report = minmax_penalty(&back)?.report();
    print!("\n{}", report.to_toml());
    Ok(())
}
