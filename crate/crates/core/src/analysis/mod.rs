//! Exact dynamic programming over tabular SSP MDPs.

mod eval;
mod linalg;
pub mod random;
mod safety;
mod vi;

pub use eval::{absorption_probability, evaluate_policy, reaches_goal, PolicyEval};
pub use safety::{
    all_policies, controllability, delta_p, diameter, enumerate_evaluated,
    enumerate_proper_policies, minmax_formula, minmax_penalty, minmax_penalty_with,
    optimal_safe_prob, policy_count, AnalysisOptions, AnalysisReport, Controllability,
    ControllabilityVariant, EvaluatedPolicy, SafetyAnalysis, CONTROLLABILITY_EPS,
    DEFAULT_POLICY_CAP,
};
pub use vi::{greedy_policy, solve, value_iteration, value_iteration_with, ViOptions, ViSolution};
