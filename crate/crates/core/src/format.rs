//! Structured-text (TOML) serialisation of [`TabularMdp`].
//!
//! ```toml
//! num_states = 4
//! num_actions = 2
//! initial_state = 0
//! goals = [1, 3]
//! unsafe_goals = [1]
//! transition = [
//!   [0, 0, 1, 0.25],   # state, action, next_state, probability
//!   ...
//! ]
//! reward = [
//!   [0, 0, 1, -1.0],   # state, action, next_state, reward
//! ]
//! ```
//!
//! Omitted entries are zero. Self-loops of declared goals may be left out and
//! are filled in on load.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::FormatError;
use crate::mdp::{MdpBuilder, TabularMdp};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    fn as_f64(&self) -> f64 {
        match *self {
            Number::Int(i) => i as f64,
            Number::Float(f) => f,
        }
    }

    fn as_index(&self) -> Option<usize> {
        match *self {
            Number::Int(i) if i >= 0 => Some(i as usize),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMdp {
    num_states: usize,
    num_actions: usize,
    transition: Vec<Vec<Number>>,
    #[serde(default)]
    reward: Vec<Vec<Number>>,
    goals: Vec<usize>,
    unsafe_goals: Vec<usize>,
    initial_state: usize,
}

fn quads(
    field: &'static str,
    entries: &[Vec<Number>],
) -> Result<Vec<(usize, usize, usize, f64)>, FormatError> {
    entries
        .iter()
        .enumerate()
        .map(|(entry, q)| {
            let bad = |message: String| FormatError::Field {
                field,
                entry,
                message,
            };
            if q.len() != 4 {
                return Err(bad(format!(
                    "expected [s, a, s', value], got {} items",
                    q.len()
                )));
            }
            let idx = |i: usize| {
                q[i].as_index()
                    .ok_or_else(|| bad(format!("item {i} must be a non-negative integer index")))
            };
            Ok((idx(0)?, idx(1)?, idx(2)?, q[3].as_f64()))
        })
        .collect()
}

/// Parses and validates an MDP document.
pub fn read_mdp(text: &str) -> Result<TabularMdp, FormatError> {
    let raw: RawMdp = toml::from_str(text)?;
    let mut b = MdpBuilder::new(raw.num_states, raw.num_actions);
    for (entry, (s, a, next, p)) in quads("transition", &raw.transition)?
        .into_iter()
        .enumerate()
    {
        if !(0.0..=1.0).contains(&p) {
            return Err(FormatError::Field {
                field: "transition",
                entry,
                message: format!("probability {p} outside [0, 1]"),
            });
        }
        b.transition(s, a, next, p)
            .map_err(|e| FormatError::Field {
                field: "transition",
                entry,
                message: e.to_string(),
            })?;
    }
    for (entry, (s, a, next, r)) in quads("reward", &raw.reward)?.into_iter().enumerate() {
        b.reward(s, a, next, r).map_err(|e| FormatError::Field {
            field: "reward",
            entry,
            message: e.to_string(),
        })?;
    }
    b.goals(raw.goals)
        .unsafe_goals(raw.unsafe_goals)
        .initial_state(raw.initial_state);
    Ok(b.build()?)
}

/// Writes an MDP so that [`read_mdp`] reproduces it bit-for-bit.
pub fn write_mdp(mdp: &TabularMdp) -> String {
    let mut out = String::new();
    let list = |xs: &[usize]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(out, "num_states = {}", mdp.num_states());
    let _ = writeln!(out, "num_actions = {}", mdp.num_actions());
    let _ = writeln!(out, "initial_state = {}", mdp.initial_state());
    let _ = writeln!(out, "goals = [{}]", list(mdp.goals()));
    let _ = writeln!(out, "unsafe_goals = [{}]", list(mdp.unsafe_goals()));

    out.push_str("transition = [\n");
    for s in 0..mdp.num_states() {
        for a in 0..mdp.num_actions() {
            for (next, &p) in mdp.row(s, a).iter().enumerate() {
                // goal self-loops are implied
                if p == 0.0 || (mdp.is_goal(s) && next == s) {
                    continue;
                }
                let _ = writeln!(out, "  [{s}, {a}, {next}, {p:?}],");
            }
        }
    }
    out.push_str("]\n");

    out.push_str("reward = [\n");
    for s in 0..mdp.num_states() {
        for a in 0..mdp.num_actions() {
            for (next, &r) in mdp.reward_row(s, a).iter().enumerate() {
                if r.to_bits() == 0 {
                    continue;
                }
                let _ = writeln!(out, "  [{s}, {a}, {next}, {r:?}],");
            }
        }
    }
    out.push_str("]\n");
    out
}
