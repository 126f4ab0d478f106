//! Driver behavior: the fuzzy car-following model and the two fuzzy
//! lane-changing models (toward the nearside under rear pressure, toward
//! the offside for overtaking), plus the crisp helper quantities they
//! consume.

mod car_following;
mod lane_change;
mod lut;
mod params;

pub use car_following::{
    compute_desired_gap, compute_dssd, compute_dv, following_acceleration, free_acceleration,
    CarFollowingModel, RuleOverride,
};
pub use lane_change::{
    decide_lane_change, gap_satisfaction, lcn_intention, lco_intention, overtaking_benefit,
    overtaking_opportunity, pressure_from_rear, safety_gap_check, AdjacentLane, LaneChangeContext,
    LaneChangeDecision, LaneChangeDirection, LaneChangeModel, NeighborAhead, NeighborBehind,
};
pub use params::DriverParams;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("fuzzy model: {0}")]
    Fuzzy(#[from] crate::fuzzy::FuzzyError),
    #[error("driver parameter '{0}' must be positive, got {1}")]
    NonPositiveParam(&'static str, f64),
    #[error("lane-change intention threshold must lie in (0,1), got {0}")]
    BadThreshold(f64),
    #[error("max_decel ({0}) must be at least max_accel ({1})")]
    DecelBelowAccel(f64, f64),
    #[error("desired gap must be positive, got {0}")]
    NonPositiveDesiredGap(f64),
    #[error("car-following rule ({0}, {1}) must keep its pinned consequent {2}")]
    PinnedRuleChanged(usize, usize, usize),
    #[error("rule override references unknown term '{0}'")]
    UnknownOverrideTerm(String),
}

/// Builds the graded consequent table `round((i + j) / 2)` used to fill the
/// rule matrices. Exact half ties are rounded away from the middle
/// consequent so the table has no flat band around the neutral response;
/// a flat band would let a following vehicle settle anywhere inside it.
pub(crate) fn graded_consequent(i: usize, j: usize, n_out: usize) -> usize {
    let x = (i + j) as f64 / 2.0;
    let floor = x.floor();
    let k = if x - floor == 0.5 {
        let mid = (n_out - 1) as f64 / 2.0;
        if x < mid {
            floor
        } else {
            floor + 1.0
        }
    } else {
        x.round()
    };
    (k as usize).min(n_out - 1)
}

#[cfg(test)]
mod tests {
    use super::graded_consequent;

    #[test]
    fn graded_table_five_by_five() {
        let m: Vec<Vec<usize>> = (0..5)
            .map(|i| (0..5).map(|j| graded_consequent(i, j, 5)).collect())
            .collect();
        assert_eq!(
            m,
            vec![
                vec![0, 0, 1, 1, 2],
                vec![0, 1, 1, 2, 3],
                vec![1, 1, 2, 3, 3],
                vec![1, 2, 3, 3, 4],
                vec![2, 3, 3, 4, 4],
            ]
        );
        // Diagonal stays the identity and (1, 3) lands on the neutral entry.
        for i in 0..5 {
            assert_eq!(m[i][i], i);
        }
        assert_eq!(m[1][3], 2);
    }

    #[test]
    fn graded_table_three_by_three() {
        let m: Vec<Vec<usize>> = (0..3)
            .map(|i| (0..3).map(|j| graded_consequent(i, j, 3)).collect())
            .collect();
        assert_eq!(m, vec![vec![0, 0, 1], vec![0, 1, 2], vec![1, 2, 2]]);
        assert_eq!(m[0][2], 1);
    }
}
