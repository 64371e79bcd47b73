//! Controllability, diameter and the Minmax penalty, computed by brute force
//! over the deterministic proper policies of a small MDP.

use serde::{Deserialize, Serialize};

use crate::analysis::eval::{evaluate_policy, PolicyEval};
use crate::error::AnalysisError;
use crate::mdp::{DetPolicy, RewardBounds, TabularMdp, PROB_TOLERANCE};

pub const DEFAULT_POLICY_CAP: u128 = 1_000_000;

/// Controllability below this counts as zero.
pub const CONTROLLABILITY_EPS: f64 = 1e-9;

/// `|A|^|internal states|`, saturating.
pub fn policy_count(mdp: &TabularMdp) -> u128 {
    let n = mdp.internal_states().len() as u32;
    (mdp.num_actions() as u128)
        .checked_pow(n)
        .unwrap_or(u128::MAX)
}

/// Every deterministic policy over internal states, lexicographic in the
/// internal-state actions (first internal state most significant).
pub fn all_policies(
    mdp: &TabularMdp,
    cap: u128,
) -> Result<impl Iterator<Item = DetPolicy> + '_, AnalysisError> {
    let count = policy_count(mdp);
    if count > cap {
        return Err(AnalysisError::CapExceeded { count, cap });
    }
    let n = mdp.internal_states().len();
    let a = mdp.num_actions();
    let mut digits = vec![0usize; n];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let pi = DetPolicy::from_internal(mdp, &digits).expect("odometer stays in range");
        done = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < a {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(pi)
    }))
}

/// A proper policy together with its exact evaluation.
#[derive(Debug, Clone)]
pub struct EvaluatedPolicy {
    pub policy: DetPolicy,
    pub eval: PolicyEval,
}

/// All proper deterministic policies, evaluated.
pub fn enumerate_evaluated(
    mdp: &TabularMdp,
    cap: u128,
) -> Result<Vec<EvaluatedPolicy>, AnalysisError> {
    Ok(all_policies(mdp, cap)?
        .filter_map(|policy| {
            let eval = evaluate_policy(mdp, &policy);
            eval.proper.then_some(EvaluatedPolicy { policy, eval })
        })
        .collect())
}

/// All proper deterministic policies, in lexicographic order.
pub fn enumerate_proper_policies(
    mdp: &TabularMdp,
    cap: u128,
) -> Result<Vec<DetPolicy>, AnalysisError> {
    Ok(enumerate_evaluated(mdp, cap)?
        .into_iter()
        .map(|e| e.policy)
        .collect())
}

fn evaluate_all(mdp: &TabularMdp, policies: &[DetPolicy]) -> Vec<EvaluatedPolicy> {
    policies
        .iter()
        .map(|p| EvaluatedPolicy {
            policy: p.clone(),
            eval: evaluate_policy(mdp, p),
        })
        .collect()
}

/// `ΔP_s(π₁, π₂)`: difference of safe-termination probabilities at `state`.
pub fn delta_p(mdp: &TabularMdp, pi1: &DetPolicy, pi2: &DetPolicy, state: usize) -> f64 {
    evaluate_policy(mdp, pi1).safe_prob[state] - evaluate_policy(mdp, pi2).safe_prob[state]
}

/// How the per-state safe-probability gaps of a policy pair are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllabilityVariant {
    /// min over pairs of the max over states.
    #[default]
    PairsMax,
    /// min over pairs of the min over states.
    StatesMin,
}

impl std::str::FromStr for ControllabilityVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pairs-max" => Ok(Self::PairsMax),
            "states-min" => Ok(Self::StatesMin),
            other => Err(format!(
                "unknown controllability variant `{other}` (pairs-max | states-min)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Controllability {
    pub value: f64,
    /// Indices into the policy list of the pair attaining the minimum.
    pub argmin_pair: Option<(usize, usize)>,
    /// Fewer than two behaviourally distinct proper policies.
    pub degenerate: bool,
}

fn same_behaviour(mdp: &TabularMdp, a: &PolicyEval, b: &PolicyEval) -> bool {
    mdp.internal_states()
        .iter()
        .all(|&s| (a.safe_prob[s] - b.safe_prob[s]).abs() <= PROB_TOLERANCE)
}

fn controllability_of(
    mdp: &TabularMdp,
    set: &[EvaluatedPolicy],
    variant: ControllabilityVariant,
) -> Controllability {
    let mut best: Option<(f64, (usize, usize))> = None;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let (a, b) = (&set[i].eval, &set[j].eval);
            if same_behaviour(mdp, a, b) {
                continue;
            }
            let gaps = mdp
                .internal_states()
                .iter()
                .map(|&s| (a.safe_prob[s] - b.safe_prob[s]).abs());
            let gap = match variant {
                ControllabilityVariant::PairsMax => gaps.fold(0.0, f64::max),
                ControllabilityVariant::StatesMin => gaps.fold(f64::INFINITY, f64::min),
            };
            if best.is_none_or(|(b, _)| gap < b) {
                best = Some((gap, (i, j)));
            }
        }
    }
    match best {
        Some((value, pair)) => Controllability {
            value,
            argmin_pair: Some(pair),
            degenerate: false,
        },
        None => Controllability {
            value: 0.0,
            argmin_pair: None,
            degenerate: true,
        },
    }
}

/// Smallest, over behaviourally distinct policy pairs, of the combined gap in
/// safe-termination probability.
pub fn controllability(
    mdp: &TabularMdp,
    policies: &[DetPolicy],
    variant: ControllabilityVariant,
) -> Controllability {
    let set: Vec<_> = evaluate_all(mdp, policies)
        .into_iter()
        .filter(|e| e.eval.proper)
        .collect();
    let mut c = controllability_of(mdp, &set, variant);
    // map indices back to `policies`
    if let Some((i, j)) = c.argmin_pair {
        let find = |p: &DetPolicy| {
            policies
                .iter()
                .position(|q| q == p)
                .expect("policy came from input")
        };
        c.argmin_pair = Some((find(&set[i].policy), find(&set[j].policy)));
    }
    c
}

fn diameter_of(mdp: &TabularMdp, set: &[EvaluatedPolicy]) -> Result<f64, AnalysisError> {
    let mut d: f64 = 0.0;
    for e in set {
        let t = e.eval.hit_time()?;
        for &s in mdp.internal_states() {
            d = d.max(t[s]);
        }
    }
    Ok(d)
}

/// Largest expected hitting time over proper policies and internal states.
pub fn diameter(mdp: &TabularMdp, policies: &[DetPolicy]) -> Result<f64, AnalysisError> {
    if policies.is_empty() {
        return Err(AnalysisError::NoProperPolicy);
    }
    diameter_of(mdp, &evaluate_all(mdp, policies))
}

/// Per-state maximum of the safe-termination probability over `policies`.
pub fn optimal_safe_prob(mdp: &TabularMdp, policies: &[DetPolicy]) -> Vec<f64> {
    optimal_safe_prob_of(mdp, &evaluate_all(mdp, policies))
}

fn optimal_safe_prob_of(mdp: &TabularMdp, set: &[EvaluatedPolicy]) -> Vec<f64> {
    (0..mdp.num_states())
        .map(|s| {
            if mdp.is_goal(s) {
                return if mdp.is_safe_goal(s) { 1.0 } else { 0.0 };
            }
            set.iter().map(|e| e.eval.safe_prob[s]).fold(0.0, f64::max)
        })
        .collect()
}

/// `min(r_min, (r_min - r_max) · D / C)`.
pub fn minmax_formula(bounds: RewardBounds, diameter: f64, controllability: f64) -> f64 {
    bounds
        .r_min
        .min(bounds.span() * -diameter / controllability)
}

#[derive(Debug, Clone)]
pub struct SafetyAnalysis {
    pub controllability: f64,
    pub diameter: f64,
    pub bounds: RewardBounds,
    pub minmax_penalty: f64,
    pub variant: ControllabilityVariant,
    pub proper_policies: Vec<DetPolicy>,
    pub evals: Vec<PolicyEval>,
    pub argmin_pair: (DetPolicy, DetPolicy),
    /// Per-state best achievable safe-termination probability.
    pub optimal_safe_prob: Vec<f64>,
}

impl SafetyAnalysis {
    pub fn report(&self) -> AnalysisReport {
        AnalysisReport {
            controllability: self.controllability,
            diameter: self.diameter,
            r_min: self.bounds.r_min,
            r_max: self.bounds.r_max,
            minmax_penalty: self.minmax_penalty,
            n_proper_policies: self.proper_policies.len(),
            variant: self.variant,
            argmin_pair: [
                self.argmin_pair.0.actions().to_vec(),
                self.argmin_pair.1.actions().to_vec(),
            ],
        }
    }

    /// `min(r_min, (r_min - r_max) / C)`: the controllability-only penalty.
    pub fn inverse_controllability_penalty(&self) -> f64 {
        minmax_formula(self.bounds, 1.0, self.controllability)
    }

    /// `min(r_min, (r_min - r_max) · D)`: the diameter-only penalty.
    pub fn diameter_penalty(&self) -> f64 {
        minmax_formula(self.bounds, self.diameter, 1.0)
    }
}

/// Options for [`minmax_penalty_with`].
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub policy_cap: u128,
    pub variant: ControllabilityVariant,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            policy_cap: DEFAULT_POLICY_CAP,
            variant: ControllabilityVariant::PairsMax,
        }
    }
}

/// Full safety analysis with default options.
pub fn minmax_penalty(mdp: &TabularMdp) -> Result<SafetyAnalysis, AnalysisError> {
    minmax_penalty_with(mdp, AnalysisOptions::default())
}

pub fn minmax_penalty_with(
    mdp: &TabularMdp,
    opts: AnalysisOptions,
) -> Result<SafetyAnalysis, AnalysisError> {
    let set = enumerate_evaluated(mdp, opts.policy_cap)?;
    let c = controllability_of(mdp, &set, opts.variant);
    if c.degenerate || c.value <= CONTROLLABILITY_EPS {
        return Err(AnalysisError::Uncontrollable {
            controllability: c.value,
        });
    }
    let diameter = diameter_of(mdp, &set)?;
    let bounds = mdp.analysis_bounds();
    let (i, j) = c.argmin_pair.expect("non-degenerate");
    let optimal_safe_prob = optimal_safe_prob_of(mdp, &set);
    let argmin_pair = (set[i].policy.clone(), set[j].policy.clone());
    let (proper_policies, evals) = set.into_iter().map(|e| (e.policy, e.eval)).unzip();
    Ok(SafetyAnalysis {
        controllability: c.value,
        diameter,
        bounds,
        minmax_penalty: minmax_formula(bounds, diameter, c.value),
        variant: opts.variant,
        proper_policies,
        evals,
        argmin_pair,
        optimal_safe_prob,
    })
}

/// Structured-text summary of a [`SafetyAnalysis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(rename = "C")]
    pub controllability: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub minmax_penalty: f64,
    pub n_proper_policies: usize,
    pub variant: ControllabilityVariant,
    /// Full per-state action vectors of the two policies attaining `C`.
    pub argmin_pair: [Vec<usize>; 2],
}

impl AnalysisReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report fields are serialisable")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
