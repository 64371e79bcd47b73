use serde::{Deserialize, Serialize};

use crate::error::LearnerError;

/// Running reward and value extremes and the penalty derived from them.
///
/// Starts at all zeros. Every update folds in one observed reward and the
/// learner's current value of the state it was observed from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MinmaxEstimate {
    pub r_min_obs: f64,
    pub r_max_obs: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub penalty: f64,
}

impl MinmaxEstimate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds in reward `reward` observed on leaving a state whose current
    /// value estimate is `value`.
    pub fn update(&self, reward: f64, value: f64) -> Result<Self, LearnerError> {
        if !reward.is_finite() || !value.is_finite() {
            return Err(LearnerError::NonFinite { reward, value });
        }
        let r_min_obs = self.r_min_obs.min(reward);
        let r_max_obs = self.r_max_obs.max(reward);
        let v_min = self.v_min.min(r_min_obs).min(value);
        let v_max = self.v_max.max(r_max_obs).max(value);
        Ok(Self {
            r_min_obs,
            r_max_obs,
            v_min,
            v_max,
            penalty: r_min_obs.min(v_min - v_max),
        })
    }

    /// Folds a whole sequence of `(reward, value)` observations.
    pub fn fold(observations: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, LearnerError> {
        observations
            .into_iter()
            .try_fold(Self::new(), |est, (r, v)| est.update(r, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_penalty() {
        let est = MinmaxEstimate::new().update(-0.1, 0.0).unwrap();
        assert_eq!(est.penalty, -0.1);
        assert_eq!(est.v_min, -0.1);
        assert_eq!(est.v_max, 0.0);
    }

    #[test]
    fn goal_reward_widens_the_value_range() {
        let est = MinmaxEstimate::new()
            .update(-0.1, 0.0)
            .unwrap()
            .update(1.0, 0.0)
            .unwrap();
        assert_eq!(est.r_max_obs, 1.0);
        assert_eq!(est.v_max, 1.0);
        assert!((est.penalty - (-1.1)).abs() < 1e-15);
    }

    #[test]
    fn low_value_drives_the_penalty() {
        let est = MinmaxEstimate::fold([(-0.1, 0.0), (1.0, 0.0), (-0.1, -3.0)]).unwrap();
        assert_eq!(est.v_min, -3.0);
        assert_eq!(est.v_max, 1.0);
        assert_eq!(est.penalty, -4.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(MinmaxEstimate::new().update(f64::NAN, 0.0).is_err());
        assert!(MinmaxEstimate::new().update(0.0, f64::INFINITY).is_err());
    }
}
