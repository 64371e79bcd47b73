use crate::error::EnvError;
use crate::mdp::{MdpBuilder, TabularMdp};

pub const S0: usize = 0;
/// Unsafe absorbing state.
pub const S1: usize = 1;
pub const S2: usize = 2;
/// Safe absorbing state.
pub const S3: usize = 3;

pub const A1: usize = 0;
pub const A2: usize = 1;

/// Reward on every non-absorbing transition, including the final entry into
/// a goal.
pub const STEP_REWARD: f64 = -1.0;

/// Stochasticity parameter of the four-state chain walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainWalkSpec {
    p: f64,
}

impl ChainWalkSpec {
    pub fn new(p: f64) -> Result<Self, EnvError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EnvError::Probability {
                name: "p",
                value: p,
            });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Four states `s0..s3`, two actions. From `s0`, `a1` reaches `s2` with
    /// probability `1 - p` and the unsafe `s1` with probability `p`; `a2`
    /// swaps the two. `s2` loops with probability `p` under either action and
    /// otherwise enters the safe `s3`.
    pub fn build(&self) -> Result<TabularMdp, EnvError> {
        let p = self.p;
        let mut b = MdpBuilder::new(4, 2);
        b.arc(S0, A1, S2, 1.0 - p, STEP_REWARD)?
            .arc(S0, A1, S1, p, STEP_REWARD)?
            .arc(S0, A2, S2, p, STEP_REWARD)?
            .arc(S0, A2, S1, 1.0 - p, STEP_REWARD)?;
        for a in [A1, A2] {
            b.arc(S2, a, S2, p, STEP_REWARD)?
                .arc(S2, a, S3, 1.0 - p, STEP_REWARD)?;
        }
        b.goals([S1, S3]).unsafe_goals([S1]).initial_state(S0);
        Ok(b.build()?)
    }
}

/// Shorthand for `ChainWalkSpec::new(p)?.build()`.
pub fn chain_walk(p: f64) -> Result<TabularMdp, EnvError> {
    ChainWalkSpec::new(p)?.build()
}
