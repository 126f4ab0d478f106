use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::lut::Lut2;
use super::{graded_consequent, DriverError, DriverParams};
use crate::fuzzy::{FuzzyRule, FuzzyVariable, RuleBase};

/// Relaxation gain toward the desired speed for unconstrained driving, 1/s.
const FREE_FLOW_GAIN: f64 = 0.4;

pub const DV_TERMS: [&str; 5] = ["opening_fast", "opening", "steady", "closing", "closing_fast"];
pub const DSSD_TERMS: [&str; 5] =
    ["much_too_far", "too_far", "satisfied", "too_close", "much_too_close"];
pub const RESPONSE_TERMS: [&str; 5] =
    ["strong_accel", "light_accel", "no_action", "light_decel", "strong_decel"];

/// Replaces the graded consequent of one rule, everything referenced by
/// term name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleOverride {
    pub input_terms: (String, String),
    pub output_term: String,
}

/// The 25-rule fuzzy car-following model: relative speed and gap ratio in,
/// acceleration out.
///
/// The graded rule table is kept structurally faithful to its sources: the
/// five diagonal rules map term row `i` to response `i`, and the
/// (opening, too_close) combination stays "no action". Overrides that break
/// those entries are rejected.
#[derive(Debug)]
pub struct CarFollowingModel {
    base: RuleBase,
    lut: OnceLock<Lut2>,
}

impl CarFollowingModel {
    pub fn new(
        dv: FuzzyVariable,
        dssd: FuzzyVariable,
        response: FuzzyVariable,
        overrides: &[RuleOverride],
    ) -> Result<Self, DriverError> {
        assert_eq!(dv.terms().len(), 5, "car-following model uses five relative-speed terms");
        assert_eq!(dssd.terms().len(), 5, "car-following model uses five gap-ratio terms");
        assert_eq!(response.terms().len(), 5, "car-following model uses five response terms");
        let mut matrix = [[0usize; 5]; 5];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = graded_consequent(i, j, 5);
            }
        }
        for ov in overrides {
            let i = dv
                .term_index(&ov.input_terms.0)
                .ok_or_else(|| DriverError::UnknownOverrideTerm(ov.input_terms.0.clone()))?;
            let j = dssd
                .term_index(&ov.input_terms.1)
                .ok_or_else(|| DriverError::UnknownOverrideTerm(ov.input_terms.1.clone()))?;
            let k = response
                .term_index(&ov.output_term)
                .ok_or_else(|| DriverError::UnknownOverrideTerm(ov.output_term.clone()))?;
            matrix[i][j] = k;
        }
        for i in 0..5 {
            if matrix[i][i] != i {
                return Err(DriverError::PinnedRuleChanged(i, i, i));
            }
        }
        if matrix[1][3] != 2 {
            return Err(DriverError::PinnedRuleChanged(1, 3, 2));
        }

        let mut rules = Vec::with_capacity(25);
        for (i, row) in matrix.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                rules.push(FuzzyRule {
                    antecedents: vec![
                        (dv.name().to_string(), dv.terms()[i].0.clone()),
                        (dssd.name().to_string(), dssd.terms()[j].0.clone()),
                    ],
                    consequent: (response.name().to_string(), response.terms()[k].0.clone()),
                });
            }
        }
        let base = RuleBase::new(vec![dv, dssd], response, rules)?;
        Ok(Self { base, lut: OnceLock::new() })
    }

    pub fn default_motor() -> Self {
        Self::new(
            FuzzyVariable::uniform_partition("dv", -10.0, 10.0, &DV_TERMS).unwrap(),
            FuzzyVariable::uniform_partition("dssd", 0.0, 2.0, &DSSD_TERMS).unwrap(),
            FuzzyVariable::uniform_partition("response", -4.5, 4.5, &RESPONSE_TERMS).unwrap(),
            &[],
        )
        .unwrap()
    }

    pub fn default_non_motor() -> Self {
        Self::new(
            FuzzyVariable::uniform_partition("dv", -6.0, 6.0, &DV_TERMS).unwrap(),
            FuzzyVariable::uniform_partition("dssd", 0.0, 2.0, &DSSD_TERMS).unwrap(),
            FuzzyVariable::uniform_partition("response", -3.0, 3.0, &RESPONSE_TERMS).unwrap(),
            &[],
        )
        .unwrap()
    }

    pub fn rule_base(&self) -> &RuleBase {
        &self.base
    }

    pub fn dv_variable(&self) -> &FuzzyVariable {
        &self.base.inputs()[0]
    }

    pub fn dssd_variable(&self) -> &FuzzyVariable {
        &self.base.inputs()[1]
    }

    pub fn response_variable(&self) -> &FuzzyVariable {
        &self.base.output()
    }

    /// Unclamped crisp response from direct fuzzy inference.
    pub fn acceleration(&self, dv: f64, dssd: f64) -> f64 {
        self.base
            .infer_crisp_pair(dv, dssd)
            .expect("inputs are clamped and the rule base is complete")
    }

    /// Cached-table evaluation of [`acceleration`](Self::acceleration); the
    /// table is built lazily on first use and shared across threads.
    pub fn acceleration_fast(&self, dv: f64, dssd: f64) -> f64 {
        let lut = self.lut.get_or_init(|| {
            Lut2::build(
                self.dv_variable().universe(),
                self.dssd_variable().universe(),
                |x, y| self.acceleration(x, y),
            )
        });
        lut.eval(
            self.dv_variable().clamp(dv),
            self.dssd_variable().clamp(dssd),
        )
    }
}

/// Relative speed; positive means the gap is opening.
pub fn compute_dv(leader_speed: f64, follower_speed: f64) -> f64 {
    leader_speed - follower_speed
}

/// Speed-dependent desired clear gap.
pub fn compute_desired_gap(p: &DriverParams, follower_speed: f64) -> f64 {
    p.standstill_gap + p.desired_time_headway * follower_speed
}

/// Ratio of the actual clear gap to the desired gap; 1.0 means satisfied.
pub fn compute_dssd(gap: f64, desired_gap: f64) -> Result<f64, DriverError> {
    if !(desired_gap > 0.0) {
        return Err(DriverError::NonPositiveDesiredGap(desired_gap));
    }
    Ok(gap / desired_gap)
}

/// Fuzzy car-following response, clamped to the driver's comfort limits.
pub fn following_acceleration(
    cf: &CarFollowingModel,
    dv: f64,
    dssd: f64,
    p: &DriverParams,
) -> f64 {
    cf.acceleration(dv, dssd).clamp(-p.max_decel, p.max_accel)
}

/// Relaxation toward the desired speed for a leaderless vehicle.
pub fn free_acceleration(p: &DriverParams, speed: f64) -> f64 {
    (FREE_FLOW_GAIN * (p.desired_speed - speed)).clamp(-p.max_decel, p.max_accel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn motor() -> CarFollowingModel {
        CarFollowingModel::default_motor()
    }

    fn params() -> DriverParams {
        DriverParams::typical_motor()
    }

    #[test]
    fn dv_sign_convention() {
        assert_eq!(compute_dv(10.0, 10.0), 0.0);
        assert_eq!(compute_dv(15.0, 10.0), 5.0);
        assert_eq!(compute_dv(5.0, 10.0), -5.0);
    }

    #[test]
    fn desired_gap_examples() {
        let p = params();
        assert_relative_eq!(compute_desired_gap(&p, 0.0), 2.0);
        assert_relative_eq!(compute_desired_gap(&p, 10.0), 17.0);
        assert_relative_eq!(compute_desired_gap(&p, 20.0), 32.0);
    }

    #[test]
    fn dssd_examples() {
        assert_relative_eq!(compute_dssd(17.0, 17.0).unwrap(), 1.0);
        assert_relative_eq!(compute_dssd(34.0, 17.0).unwrap(), 2.0);
        assert_relative_eq!(compute_dssd(0.0, 17.0).unwrap(), 0.0);
        assert!(compute_dssd(1.0, 0.0).is_err());
    }

    #[test]
    fn pinned_rules_hold_at_term_peaks() {
        let cf = motor();
        let p = params();
        // opening + too_close -> no action.
        assert!(following_acceleration(&cf, 5.0, 0.5, &p).abs() <= 1e-12);
        // steady + satisfied -> no action (equilibrium).
        assert!(following_acceleration(&cf, 0.0, 1.0, &p).abs() <= 1e-12);
        // closing_fast + much_too_close -> strong deceleration, clamped.
        let a = following_acceleration(&cf, -10.0, 0.0, &p);
        assert_relative_eq!(cf.acceleration(-10.0, 0.0), -3.75, epsilon = 1e-3);
        assert_relative_eq!(a, -p.max_decel);
        // diagonal light deceleration keeps its peak value.
        assert_relative_eq!(cf.acceleration(-5.0, 0.5), -2.25, epsilon = 1e-9);
    }

    #[test]
    fn output_stays_within_driver_limits() {
        let cf = motor();
        let p = params();
        for i in 0..30 {
            for j in 0..30 {
                let dv = -12.0 + 24.0 * i as f64 / 29.0;
                let dssd = -0.2 + 2.4 * j as f64 / 29.0;
                let a = following_acceleration(&cf, dv, dssd, &p);
                assert!(a >= -p.max_decel - 1e-12 && a <= p.max_accel + 1e-12);
                assert!(a.is_finite());
            }
        }
    }

    #[test]
    fn surface_is_monotone_on_a_50x50_grid() {
        let cf = motor();
        let p = params();
        let n = 50;
        let mut surf = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let dv = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
                let dssd = 2.0 * j as f64 / (n - 1) as f64;
                surf[i][j] = following_acceleration(&cf, dv, dssd, &p);
            }
        }
        for j in 0..n {
            for i in 1..n {
                // More closing (smaller dv) must not accelerate harder.
                assert!(surf[i - 1][j] <= surf[i][j] + 1e-9);
            }
        }
        for i in 0..n {
            for j in 1..n {
                assert!(surf[i][j - 1] <= surf[i][j] + 1e-9);
            }
        }
    }

    #[test]
    fn cached_table_matches_direct_inference_at_nodes_and_nearby() {
        let cf = motor();
        // Node-aligned inputs are exact.
        for (dv, dssd) in [(5.0, 0.5), (0.0, 1.0), (-10.0, 0.0), (2.0, 1.2)] {
            assert_relative_eq!(
                cf.acceleration_fast(dv, dssd),
                cf.acceleration(dv, dssd),
                epsilon = 1e-12
            );
        }
        // Off-node inputs stay close.
        for (dv, dssd) in [(3.33, 0.77), (-6.1, 1.91), (0.05, 0.99)] {
            assert!((cf.acceleration_fast(dv, dssd) - cf.acceleration(dv, dssd)).abs() < 0.02);
        }
    }

    #[test]
    fn free_acceleration_examples() {
        let p = params();
        assert_eq!(free_acceleration(&p, p.desired_speed), 0.0);
        let mut p2 = p;
        p2.desired_speed = 15.0;
        p2.max_accel = 2.0;
        assert_relative_eq!(free_acceleration(&p2, 0.0), 2.0);
        assert!(free_acceleration(&p, p.desired_speed + 0.5) < 0.0);
        assert!(free_acceleration(&p, p.desired_speed + 0.5) > -0.5);
    }

    #[test]
    fn overrides_cannot_break_pinned_rules() {
        let make = |ov: &[RuleOverride]| {
            CarFollowingModel::new(
                FuzzyVariable::uniform_partition("dv", -10.0, 10.0, &DV_TERMS).unwrap(),
                FuzzyVariable::uniform_partition("dssd", 0.0, 2.0, &DSSD_TERMS).unwrap(),
                FuzzyVariable::uniform_partition("response", -4.5, 4.5, &RESPONSE_TERMS).unwrap(),
                ov,
            )
        };
        let bad = RuleOverride {
            input_terms: ("opening".into(), "too_close".into()),
            output_term: "strong_accel".into(),
        };
        assert!(matches!(make(&[bad]), Err(DriverError::PinnedRuleChanged(1, 3, 2))));
        let ok = RuleOverride {
            input_terms: ("closing".into(), "much_too_far".into()),
            output_term: "no_action".into(),
        };
        assert!(make(&[ok]).is_ok());
    }
}
