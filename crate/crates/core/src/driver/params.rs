use serde::{Deserialize, Serialize};

use super::DriverError;

/// Per-driver behavioral parameters. Speeds in m/s, gaps in m, times in s,
/// accelerations in m/s² (`max_decel` is a positive magnitude).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriverParams {
    pub desired_speed: f64,
    pub desired_time_headway: f64,
    pub standstill_gap: f64,
    pub max_accel: f64,
    pub max_decel: f64,
    /// How often fuzzy decisions are re-evaluated.
    pub decision_period: f64,
    pub lc_intention_threshold: f64,
}

impl DriverParams {
    pub fn validate(&self) -> Result<(), DriverError> {
        let fields = [
            ("desired_speed", self.desired_speed),
            ("desired_time_headway", self.desired_time_headway),
            ("standstill_gap", self.standstill_gap),
            ("max_accel", self.max_accel),
            ("max_decel", self.max_decel),
            ("decision_period", self.decision_period),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(DriverError::NonPositiveParam(name, v));
            }
        }
        if !(self.lc_intention_threshold > 0.0 && self.lc_intention_threshold < 1.0) {
            return Err(DriverError::BadThreshold(self.lc_intention_threshold));
        }
        if self.max_decel < self.max_accel {
            return Err(DriverError::DecelBelowAccel(self.max_decel, self.max_accel));
        }
        Ok(())
    }

    pub fn typical_motor() -> Self {
        Self {
            desired_speed: 13.9,
            desired_time_headway: 1.5,
            standstill_gap: 2.0,
            max_accel: 2.5,
            max_decel: 3.5,
            decision_period: 0.5,
            lc_intention_threshold: 0.55,
        }
    }

    pub fn typical_non_motor() -> Self {
        Self {
            desired_speed: 5.5,
            desired_time_headway: 1.2,
            standstill_gap: 1.0,
            max_accel: 1.2,
            max_decel: 2.2,
            decision_period: 0.5,
            lc_intention_threshold: 0.55,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typical_params_validate() {
        DriverParams::typical_motor().validate().unwrap();
        DriverParams::typical_non_motor().validate().unwrap();
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = DriverParams::typical_motor();
        p.standstill_gap = 0.0;
        assert!(p.validate().is_err());

        let mut p = DriverParams::typical_motor();
        p.lc_intention_threshold = 1.0;
        assert!(p.validate().is_err());

        let mut p = DriverParams::typical_motor();
        p.max_decel = p.max_accel - 0.1;
        assert!(p.validate().is_err());
    }
}
