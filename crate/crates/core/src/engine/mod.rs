//! Deterministic, seedable time-stepped simulation: Poisson arrivals,
//! fuzzy driver decisions, signal obedience, conflict-point yielding,
//! semi-implicit Euler integration, and vehicle exit bookkeeping.

mod demand;
mod vehicle;
mod world;

pub use demand::{ArrivalStream, DemandInterval, DemandProfile, FlowSpec};
pub use vehicle::{Event, EventKind, QueueSample, Segment, Vehicle, VehicleId, VehicleRecord};
pub use world::{RunResult, RunTotals, World};

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::driver::{CarFollowingModel, DriverError, DriverParams, LaneChangeModel};
use crate::network::{VehicleClass, Violation};
use crate::signal::PlanViolation;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("network failed validation: {0:?}")]
    InvalidNetwork(Vec<Violation>),
    #[error("signal plan failed validation: {0:?}")]
    InvalidPlan(Vec<PlanViolation>),
    #[error("driver model: {0}")]
    Driver(#[from] DriverError),
    #[error("collision at t={t:.2}s on {corridor}: vehicle {follow} overlaps {lead} by {overlap:.3} m")]
    Collision {
        t: f64,
        corridor: String,
        lead: VehicleId,
        follow: VehicleId,
        overlap: f64,
    },
    #[error("conservation breach at t={t:.2}s: spawned {spawned} != active {active} + exited {exited} + buffered {buffered}")]
    ConservationBreach {
        t: f64,
        spawned: u64,
        active: u64,
        exited: u64,
        buffered: u64,
    },
    #[error("speed cap breach at t={t:.2}s: vehicle {vehicle} at {speed:.3} m/s exceeds {cap:.3} m/s")]
    SpeedCapBreach {
        t: f64,
        vehicle: VehicleId,
        speed: f64,
        cap: f64,
    },
}

/// Engine-level configuration; everything a run needs besides the network,
/// plan, demand and driver models.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub dt: f64,
    pub duration: f64,
    pub warmup: f64,
    pub seed: u64,
    /// Critical gap for permissive movements, s.
    pub critical_gap_motor: f64,
    pub critical_gap_non_motor: f64,
    /// Probability that a green crosswalk carries pedestrians during one
    /// pulse window.
    pub ped_intensity: f64,
    pub ped_pulse: f64,
    pub lane_change_lockout: f64,
    pub queue_sample_period: f64,
    pub stop_speed_threshold: f64,
    pub moe_interval: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.5,
            duration: 3600.0,
            warmup: 0.0,
            seed: 42,
            critical_gap_motor: 4.0,
            critical_gap_non_motor: 3.0,
            ped_intensity: 0.3,
            ped_pulse: 5.0,
            lane_change_lockout: 2.0,
            queue_sample_period: 5.0,
            stop_speed_threshold: 1.4,
            moe_interval: 900.0,
        }
    }
}

/// Truncated-normal sampler for driver parameter heterogeneity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl TruncatedNormal {
    pub fn fixed(v: f64) -> Self {
        Self { mean: v, sd: 0.0, min: v, max: v }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.sd <= 0.0 {
            return self.mean.clamp(self.min, self.max);
        }
        use rand_distr::{Distribution, Normal};
        let normal = Normal::new(self.mean, self.sd).expect("finite mean/sd");
        for _ in 0..16 {
            let v = normal.sample(rng);
            if v >= self.min && v <= self.max {
                return v;
            }
        }
        rng.gen_range(self.min..=self.max)
    }
}

/// Distributions the engine samples one [`DriverParams`] from per vehicle.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDistributions {
    pub desired_speed: TruncatedNormal,
    pub desired_time_headway: TruncatedNormal,
    pub standstill_gap: TruncatedNormal,
    pub max_accel: TruncatedNormal,
    pub max_decel: TruncatedNormal,
    pub decision_period: f64,
    pub lc_intention_threshold: f64,
}

impl ParamDistributions {
    pub fn typical_motor() -> Self {
        Self {
            desired_speed: TruncatedNormal { mean: 13.9, sd: 1.2, min: 10.5, max: 17.0 },
            desired_time_headway: TruncatedNormal { mean: 1.5, sd: 0.2, min: 1.0, max: 2.2 },
            standstill_gap: TruncatedNormal { mean: 2.0, sd: 0.3, min: 1.2, max: 3.0 },
            max_accel: TruncatedNormal { mean: 2.5, sd: 0.25, min: 1.8, max: 3.2 },
            max_decel: TruncatedNormal { mean: 3.5, sd: 0.3, min: 2.8, max: 4.5 },
            decision_period: 0.5,
            lc_intention_threshold: 0.55,
        }
    }

    pub fn typical_non_motor() -> Self {
        Self {
            desired_speed: TruncatedNormal { mean: 5.5, sd: 0.9, min: 3.5, max: 7.5 },
            desired_time_headway: TruncatedNormal { mean: 1.2, sd: 0.15, min: 0.8, max: 1.8 },
            standstill_gap: TruncatedNormal { mean: 1.0, sd: 0.15, min: 0.6, max: 1.5 },
            max_accel: TruncatedNormal { mean: 1.2, sd: 0.15, min: 0.8, max: 1.6 },
            max_decel: TruncatedNormal { mean: 2.2, sd: 0.25, min: 1.6, max: 3.0 },
            decision_period: 0.5,
            lc_intention_threshold: 0.55,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> DriverParams {
        let max_decel = self.max_decel.sample(rng);
        let max_accel = self.max_accel.sample(rng).min(max_decel);
        DriverParams {
            desired_speed: self.desired_speed.sample(rng),
            desired_time_headway: self.desired_time_headway.sample(rng),
            standstill_gap: self.standstill_gap.sample(rng),
            max_accel,
            max_decel,
            decision_period: self.decision_period,
            lc_intention_threshold: self.lc_intention_threshold,
        }
    }
}

/// Per-class behavioral package: fuzzy models, parameter distributions and
/// physical vehicle properties.
#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub car_following: Arc<CarFollowingModel>,
    pub lane_change: Arc<LaneChangeModel>,
    pub params: ParamDistributions,
    pub vehicle_length: f64,
    pub max_speed: f64,
}

#[derive(Debug, Clone)]
pub struct ModelSet {
    pub motor: ClassSpec,
    pub non_motor: ClassSpec,
}

impl ModelSet {
    pub fn default_set() -> Self {
        Self {
            motor: ClassSpec {
                car_following: Arc::new(CarFollowingModel::default_motor()),
                lane_change: Arc::new(LaneChangeModel::default_model()),
                params: ParamDistributions::typical_motor(),
                vehicle_length: 4.5,
                max_speed: 33.3,
            },
            non_motor: ClassSpec {
                car_following: Arc::new(CarFollowingModel::default_non_motor()),
                lane_change: Arc::new(LaneChangeModel::default_model()),
                params: ParamDistributions::typical_non_motor(),
                vehicle_length: 2.0,
                max_speed: 8.3,
            },
        }
    }

    pub fn class(&self, c: VehicleClass) -> &ClassSpec {
        match c {
            VehicleClass::Motor => &self.motor,
            VehicleClass::NonMotor => &self.non_motor,
        }
    }
}
