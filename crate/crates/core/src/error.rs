use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdpError {
    #[error("MDP needs at least one state and one action")]
    Empty,
    #[error("tensor shape mismatch: expected {expected} entries, transition has {transition}, reward has {reward}")]
    TensorShape {
        expected: usize,
        transition: usize,
        reward: usize,
    },
    #[error("{what} index {index} out of range (must be < {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("probability P({state}, {action}, {next}) = {value} outside [0, 1]")]
    ProbabilityOutOfRange {
        state: usize,
        action: usize,
        next: usize,
        value: f64,
    },
    #[error("row sum of transition({state}, {action}, .) is {sum}, expected 1")]
    RowSum {
        state: usize,
        action: usize,
        sum: f64,
    },
    #[error("goal state {state} is not absorbing under action {action}")]
    GoalNotAbsorbing { state: usize, action: usize },
    #[error(
        "absorbing self-loop at goal {state} under action {action} has reward {reward}, expected 0"
    )]
    AbsorbingReward {
        state: usize,
        action: usize,
        reward: f64,
    },
    #[error("unsafe goal {state} is not declared as a goal")]
    UnsafeNotGoal { state: usize },
    #[error("no unsafe goal declared")]
    NoUnsafeGoal,
    #[error("no safe goal: every goal is unsafe")]
    NoSafeGoal,
    #[error("no internal state: every state is a goal")]
    NoInternalState,
    #[error("initial state {state} is a goal state")]
    InitialNotInternal { state: usize },
    #[error("stepping terminal state {state}")]
    TerminalStep { state: usize },
    #[error("policy has {got} entries, expected {expected}")]
    PolicyLength { expected: usize, got: usize },
    #[error("non-finite {what}")]
    NonFinite { what: &'static str },
    #[error("invalid reward bounds [{r_min}, {r_max}]")]
    InvalidBounds { r_min: f64, r_max: f64 },
}

/// Failure reading the structured-text MDP format.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("field `{field}` entry {entry}: {message}")]
    Field {
        field: &'static str,
        entry: usize,
        message: String,
    },
    #[error("serialisation failed: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error(transparent)]
    Invalid(#[from] MdpError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error("policy enumeration needs {count} policies, above the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error(
        "uncontrollable MDP: C = {controllability} (no control over which goal set is reached)"
    )]
    Uncontrollable { controllability: f64 },
    #[error("no proper policy exists")]
    NoProperPolicy,
    #[error("policy is improper: hitting times and values are undefined")]
    ImproperPolicy,
    #[error(
        "value iteration did not converge after {iterations} sweeps (last residual {residual:e})"
    )]
    NotConverged { iterations: usize, residual: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error("probability {name} = {value} outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("layout row {row} has width {width}, expected {expected}")]
    Ragged {
        row: usize,
        width: usize,
        expected: usize,
    },
    #[error("unexpected character {ch:?} at row {row}, column {col}")]
    BadChar { ch: char, row: usize, col: usize },
    #[error("layout needs exactly one 'S', found {0}")]
    StartCount(usize),
    #[error("layout needs at least one 'G'")]
    NoGoal,
    #[error("layout needs at least one 'L' (>=1 L required)")]
    NoLava,
    #[error("layout is empty")]
    EmptyLayout,
    #[error("non-finite {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnerError {
    #[error("non-finite estimator input: reward {reward}, value {value}")]
    NonFinite { reward: f64, value: f64 },
    #[error("invalid learner config: {0}")]
    Config(String),
    #[error(transparent)]
    Mdp(#[from] MdpError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invalid sweep: {0}")]
    Sweep(String),
}
