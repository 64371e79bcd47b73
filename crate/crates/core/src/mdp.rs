//! Tabular stochastic-shortest-path MDPs.
//!
//! A [`TabularMdp`] is a dense transition/reward tensor over `S` states and
//! `A` actions, together with the absorbing goal set and the unsafe subset of
//! it. Everything downstream (exact analysis, value iteration, the learner)
//! works on this one representation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::MdpError;

/// Tolerance on transition row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Tolerance for downstream probability comparisons.
pub const PROB_TOLERANCE: f64 = 1e-9;

/// A validated tabular SSP MDP. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMdp {
    num_states: usize,
    num_actions: usize,
    transition: Vec<f64>,
    reward: Vec<f64>,
    goals: Vec<usize>,
    unsafe_goals: Vec<usize>,
    initial_state: usize,
    is_goal: Vec<bool>,
    is_unsafe: Vec<bool>,
    internal: Vec<usize>,
}

/// Smallest and largest reward an agent can observe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBounds {
    pub r_min: f64,
    pub r_max: f64,
}

impl RewardBounds {
    pub fn new(r_min: f64, r_max: f64) -> Result<Self, MdpError> {
        if !r_min.is_finite() || !r_max.is_finite() {
            return Err(MdpError::NonFinite {
                what: "reward bound",
            });
        }
        if r_min > r_max {
            return Err(MdpError::InvalidBounds { r_min, r_max });
        }
        Ok(Self { r_min, r_max })
    }

    /// Widens the bounds to contain the zero reward of absorbing self-loops.
    pub fn with_absorbing(self) -> Self {
        Self {
            r_min: self.r_min.min(0.0),
            r_max: self.r_max.max(0.0),
        }
    }

    pub fn span(&self) -> f64 {
        self.r_max - self.r_min
    }
}

/// Deterministic stationary policy. Entries for goal states are ignored and
/// normalised to action 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DetPolicy {
    action_of: Vec<usize>,
}

impl DetPolicy {
    /// Builds a policy from one action per state (goal entries are ignored).
    pub fn new(mdp: &TabularMdp, mut actions: Vec<usize>) -> Result<Self, MdpError> {
        if actions.len() != mdp.num_states() {
            return Err(MdpError::PolicyLength {
                expected: mdp.num_states(),
                got: actions.len(),
            });
        }
        for (s, a) in actions.iter_mut().enumerate() {
            if mdp.is_goal(s) {
                *a = 0;
            } else if *a >= mdp.num_actions() {
                return Err(MdpError::IndexOutOfRange {
                    what: "action",
                    index: *a,
                    bound: mdp.num_actions(),
                });
            }
        }
        Ok(Self { action_of: actions })
    }

    /// Builds a policy from one action per internal state, in
    /// [`TabularMdp::internal_states`] order.
    pub fn from_internal(mdp: &TabularMdp, internal_actions: &[usize]) -> Result<Self, MdpError> {
        if internal_actions.len() != mdp.internal_states().len() {
            return Err(MdpError::PolicyLength {
                expected: mdp.internal_states().len(),
                got: internal_actions.len(),
            });
        }
        let mut actions = vec![0; mdp.num_states()];
        for (&s, &a) in mdp.internal_states().iter().zip(internal_actions) {
            actions[s] = a;
        }
        Self::new(mdp, actions)
    }

    /// The same action everywhere.
    pub fn constant(mdp: &TabularMdp, action: usize) -> Result<Self, MdpError> {
        Self::new(mdp, vec![action; mdp.num_states()])
    }

    #[inline]
    pub fn action(&self, state: usize) -> usize {
        self.action_of[state]
    }

    pub fn actions(&self) -> &[usize] {
        &self.action_of
    }

    /// Actions restricted to internal states, in internal-state order.
    pub fn internal_actions(&self, mdp: &TabularMdp) -> Vec<usize> {
        mdp.internal_states()
            .iter()
            .map(|&s| self.action_of[s])
            .collect()
    }
}

impl TabularMdp {
    /// Validates and assembles an MDP from dense tensors laid out as
    /// `[(state * A + action) * S + next_state]`.
    pub fn new(
        num_states: usize,
        num_actions: usize,
        transition: Vec<f64>,
        reward: Vec<f64>,
        goals: Vec<usize>,
        unsafe_goals: Vec<usize>,
        initial_state: usize,
    ) -> Result<Self, MdpError> {
        let expected = num_states * num_actions * num_states;
        if num_states == 0 || num_actions == 0 {
            return Err(MdpError::Empty);
        }
        if transition.len() != expected || reward.len() != expected {
            return Err(MdpError::TensorShape {
                expected,
                transition: transition.len(),
                reward: reward.len(),
            });
        }
        let mut is_goal = vec![false; num_states];
        let mut is_unsafe = vec![false; num_states];
        for &g in &goals {
            check_index("goal state", g, num_states)?;
            is_goal[g] = true;
        }
        for &g in &unsafe_goals {
            check_index("unsafe goal state", g, num_states)?;
            if !is_goal[g] {
                return Err(MdpError::UnsafeNotGoal { state: g });
            }
            is_unsafe[g] = true;
        }
        check_index("initial state", initial_state, num_states)?;
        let goals: Vec<usize> = (0..num_states).filter(|&s| is_goal[s]).collect();
        let unsafe_goals: Vec<usize> = (0..num_states).filter(|&s| is_unsafe[s]).collect();
        let internal: Vec<usize> = (0..num_states).filter(|&s| !is_goal[s]).collect();

        let mdp = Self {
            num_states,
            num_actions,
            transition,
            reward,
            goals,
            unsafe_goals,
            initial_state,
            is_goal,
            is_unsafe,
            internal,
        };
        mdp.validate()?;
        Ok(mdp)
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), MdpError> {
        if self.unsafe_goals.is_empty() {
            return Err(MdpError::NoUnsafeGoal);
        }
        if self.goals.len() == self.unsafe_goals.len() {
            return Err(MdpError::NoSafeGoal);
        }
        if self.internal.is_empty() {
            return Err(MdpError::NoInternalState);
        }
        if self.is_goal[self.initial_state] {
            return Err(MdpError::InitialNotInternal {
                state: self.initial_state,
            });
        }
        for s in 0..self.num_states {
            for a in 0..self.num_actions {
                let row = self.row(s, a);
                let mut sum = 0.0;
                for (next, &p) in row.iter().enumerate() {
                    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                        return Err(MdpError::ProbabilityOutOfRange {
                            state: s,
                            action: a,
                            next,
                            value: p,
                        });
                    }
                    let r = self.reward(s, a, next);
                    if !r.is_finite() {
                        return Err(MdpError::NonFinite { what: "reward" });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(MdpError::RowSum {
                        state: s,
                        action: a,
                        sum,
                    });
                }
                if self.is_goal[s] {
                    if self.transition(s, a, s) != 1.0 {
                        return Err(MdpError::GoalNotAbsorbing {
                            state: s,
                            action: a,
                        });
                    }
                    if self.reward(s, a, s) != 0.0 {
                        return Err(MdpError::AbsorbingReward {
                            state: s,
                            action: a,
                            reward: self.reward(s, a, s),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn index(&self, s: usize, a: usize, next: usize) -> usize {
        (s * self.num_actions + a) * self.num_states + next
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    #[inline]
    pub fn transition(&self, s: usize, a: usize, next: usize) -> f64 {
        self.transition[self.index(s, a, next)]
    }

    #[inline]
    pub fn reward(&self, s: usize, a: usize, next: usize) -> f64 {
        self.reward[self.index(s, a, next)]
    }

    /// Next-state distribution for `(s, a)`.
    #[inline]
    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let start = self.index(s, a, 0);
        &self.transition[start..start + self.num_states]
    }

    #[inline]
    pub fn reward_row(&self, s: usize, a: usize) -> &[f64] {
        let start = self.index(s, a, 0);
        &self.reward[start..start + self.num_states]
    }

    pub fn transition_tensor(&self) -> &[f64] {
        &self.transition
    }

    pub fn reward_tensor(&self) -> &[f64] {
        &self.reward
    }

    pub fn goals(&self) -> &[usize] {
        &self.goals
    }

    pub fn unsafe_goals(&self) -> &[usize] {
        &self.unsafe_goals
    }

    /// Non-absorbing states, ascending.
    pub fn internal_states(&self) -> &[usize] {
        &self.internal
    }

    #[inline]
    pub fn is_goal(&self, s: usize) -> bool {
        self.is_goal[s]
    }

    #[inline]
    pub fn is_unsafe(&self, s: usize) -> bool {
        self.is_unsafe[s]
    }

    #[inline]
    pub fn is_safe_goal(&self, s: usize) -> bool {
        self.is_goal[s] && !self.is_unsafe[s]
    }

    /// Reward range over positive-probability transitions out of internal
    /// states. Absorbing self-loops never contribute.
    pub fn reward_bounds(&self) -> RewardBounds {
        let mut r_min = f64::INFINITY;
        let mut r_max = f64::NEG_INFINITY;
        for &s in &self.internal {
            for a in 0..self.num_actions {
                for (&p, &r) in self.row(s, a).iter().zip(self.reward_row(s, a)) {
                    if p > 0.0 {
                        r_min = r_min.min(r);
                        r_max = r_max.max(r);
                    }
                }
            }
        }
        RewardBounds { r_min, r_max }
    }

    /// Bounds used by the Minmax penalty: [`Self::reward_bounds`] widened to
    /// include the zero reward earned on absorbing self-loops.
    pub fn analysis_bounds(&self) -> RewardBounds {
        self.reward_bounds().with_absorbing()
    }

    /// Copy of this MDP with every transition into an unsafe goal paying
    /// `unsafe_reward`.
    pub fn with_unsafe_reward(&self, unsafe_reward: f64) -> Result<Self, MdpError> {
        if !unsafe_reward.is_finite() {
            return Err(MdpError::NonFinite {
                what: "unsafe reward",
            });
        }
        let mut out = self.clone();
        for &s in &self.internal {
            for a in 0..self.num_actions {
                for &g in &self.unsafe_goals {
                    let idx = self.index(s, a, g);
                    out.reward[idx] = unsafe_reward;
                }
            }
        }
        Ok(out)
    }

    /// Copy with every reward multiplied by `k`.
    pub fn scaled_rewards(&self, k: f64) -> Self {
        let mut out = self.clone();
        for r in &mut out.reward {
            *r *= k;
        }
        out
    }

    /// Draws one transition from `(s, a)`.
    pub fn sample_step<R: Rng + ?Sized>(
        &self,
        s: usize,
        a: usize,
        rng: &mut R,
    ) -> Result<(usize, f64), MdpError> {
        check_index("state", s, self.num_states)?;
        check_index("action", a, self.num_actions)?;
        if self.is_goal[s] {
            return Err(MdpError::TerminalStep { state: s });
        }
        let row = self.row(s, a);
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (next, &p) in row.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last_positive = next;
            if u < acc {
                return Ok((next, self.reward(s, a, next)));
            }
        }
        // u landed in the rounding slack above the accumulated mass.
        Ok((last_positive, self.reward(s, a, last_positive)))
    }
}

fn check_index(what: &'static str, index: usize, bound: usize) -> Result<(), MdpError> {
    if index >= bound {
        Err(MdpError::IndexOutOfRange { what, index, bound })
    } else {
        Ok(())
    }
}

/// Incremental construction of a [`TabularMdp`]. Self-loops for declared goal
/// states are filled in automatically on [`MdpBuilder::build`].
#[derive(Debug, Clone)]
pub struct MdpBuilder {
    num_states: usize,
    num_actions: usize,
    transition: Vec<f64>,
    reward: Vec<f64>,
    goals: Vec<usize>,
    unsafe_goals: Vec<usize>,
    initial_state: usize,
}

impl MdpBuilder {
    pub fn new(num_states: usize, num_actions: usize) -> Self {
        let n = num_states * num_actions * num_states;
        Self {
            num_states,
            num_actions,
            transition: vec![0.0; n],
            reward: vec![0.0; n],
            goals: Vec::new(),
            unsafe_goals: Vec::new(),
            initial_state: 0,
        }
    }

    fn index(&self, s: usize, a: usize, next: usize) -> Result<usize, MdpError> {
        check_index("state", s, self.num_states)?;
        check_index("action", a, self.num_actions)?;
        check_index("next state", next, self.num_states)?;
        Ok((s * self.num_actions + a) * self.num_states + next)
    }

    pub fn transition(
        &mut self,
        s: usize,
        a: usize,
        next: usize,
        p: f64,
    ) -> Result<&mut Self, MdpError> {
        let i = self.index(s, a, next)?;
        self.transition[i] = p;
        Ok(self)
    }

    pub fn reward(
        &mut self,
        s: usize,
        a: usize,
        next: usize,
        r: f64,
    ) -> Result<&mut Self, MdpError> {
        let i = self.index(s, a, next)?;
        self.reward[i] = r;
        Ok(self)
    }

    /// Sets both probability and reward of one arc.
    pub fn arc(
        &mut self,
        s: usize,
        a: usize,
        next: usize,
        p: f64,
        r: f64,
    ) -> Result<&mut Self, MdpError> {
        let i = self.index(s, a, next)?;
        self.transition[i] = p;
        self.reward[i] = r;
        Ok(self)
    }

    pub fn goals(&mut self, goals: impl IntoIterator<Item = usize>) -> &mut Self {
        self.goals = goals.into_iter().collect();
        self
    }

    pub fn unsafe_goals(&mut self, goals: impl IntoIterator<Item = usize>) -> &mut Self {
        self.unsafe_goals = goals.into_iter().collect();
        self
    }

    pub fn initial_state(&mut self, s: usize) -> &mut Self {
        self.initial_state = s;
        self
    }

    pub fn build(&self) -> Result<TabularMdp, MdpError> {
        let mut transition = self.transition.clone();
        let reward = self.reward.clone();
        for &g in &self.goals {
            check_index("goal state", g, self.num_states)?;
            for a in 0..self.num_actions {
                let base = (g * self.num_actions + a) * self.num_states;
                let row = &transition[base..base + self.num_states];
                if row.iter().all(|&p| p == 0.0) {
                    transition[base + g] = 1.0;
                }
            }
        }
        TabularMdp::new(
            self.num_states,
            self.num_actions,
            transition,
            reward,
            self.goals.clone(),
            self.unsafe_goals.clone(),
            self.initial_state,
        )
    }
}
