use serde::{Deserialize, Serialize};

use crate::analysis::{evaluate_policy, minmax_penalty, value_iteration};
use crate::envs::chain_walk;
use crate::error::ExperimentError;

/// Margin below the Minmax penalty used for its row, so exact ties never
/// decide the policy.
pub const MINMAX_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyLabel {
    Custom,
    /// `min(R_MIN, (R_MIN - R_MAX) / C)`
    InverseC,
    /// `min(R_MIN, (R_MIN - R_MAX) * D)`
    Diameter,
    Minmax,
}

impl PenaltyLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PenaltyLabel::Custom => "custom",
            PenaltyLabel::InverseC => "inverse-c",
            PenaltyLabel::Diameter => "diameter",
            PenaltyLabel::Minmax => "minmax",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainwalkRow {
    pub p: f64,
    pub label: PenaltyLabel,
    pub penalty: f64,
    /// `1 - safe_prob(s0)` of the value-iteration policy.
    pub failure: f64,
    /// Optimal failure probability over all proper policies.
    pub optimal_failure: f64,
    pub vi_sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainwalkStudy {
    pub rows: Vec<ChainwalkRow>,
}

/// Solves the chain walk under every listed penalty plus the three derived
/// penalties, for each `p`. Fails if any `p` is uncontrollable.
pub fn chainwalk_penalty_study(
    ps: &[f64],
    penalties: &[f64],
) -> Result<ChainwalkStudy, ExperimentError> {
    let mut rows = Vec::new();
    for &p in ps {
        let mdp = chain_walk(p)?;
        let analysis = minmax_penalty(&mdp)?;
        let s0 = mdp.initial_state();
        let optimal_failure = 1.0 - analysis.optimal_safe_prob[s0];
        let arms = penalties.iter().map(|&u| (PenaltyLabel::Custom, u)).chain([
            (
                PenaltyLabel::InverseC,
                analysis.inverse_controllability_penalty(),
            ),
            (PenaltyLabel::Diameter, analysis.diameter_penalty()),
            (
                PenaltyLabel::Minmax,
                analysis.minmax_penalty - MINMAX_MARGIN,
            ),
        ]);
        for (label, penalty) in arms {
            let sol = value_iteration(&mdp, penalty)?;
            let eval = evaluate_policy(&mdp, &sol.policy);
            rows.push(ChainwalkRow {
                p,
                label,
                penalty,
                failure: eval.failure_prob(s0),
                optimal_failure,
                vi_sweeps: sol.sweeps,
            });
        }
    }
    Ok(ChainwalkStudy { rows })
}
