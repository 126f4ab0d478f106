use std::sync::OnceLock;

use super::car_following::compute_desired_gap;
use super::lut::Lut2;
use super::{graded_consequent, DriverError, DriverParams};
use crate::fuzzy::{FuzzyRule, FuzzyVariable, RuleBase};

pub const PRESSURE_TERMS: [&str; 3] = ["high", "medium", "low"];
pub const GAP_SAT_TERMS: [&str; 3] = ["high", "medium", "low"];
pub const BENEFIT_TERMS: [&str; 3] = ["high", "medium", "low"];
pub const OPPORTUNITY_TERMS: [&str; 3] = ["good", "moderate", "bad"];
pub const INTENTION_TERMS: [&str; 3] = ["high", "medium", "low"];

/// The two 9-rule lane-change intention models: nearside changes driven by
/// rear pressure and nearside gap satisfaction, offside changes driven by
/// overtaking benefit and offside opportunity. All variables live on
/// normalized [0, 1] universes.
#[derive(Debug)]
pub struct LaneChangeModel {
    lcn: RuleBase,
    lco: RuleBase,
    lcn_lut: OnceLock<Lut2>,
    lco_lut: OnceLock<Lut2>,
}

fn build_base(
    in0: FuzzyVariable,
    in1: FuzzyVariable,
    out: FuzzyVariable,
) -> Result<RuleBase, DriverError> {
    let mut rules = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let k = graded_consequent(i, j, 3);
            rules.push(FuzzyRule {
                antecedents: vec![
                    (in0.name().to_string(), in0.terms()[i].0.clone()),
                    (in1.name().to_string(), in1.terms()[j].0.clone()),
                ],
                consequent: (out.name().to_string(), out.terms()[k].0.clone()),
            });
        }
    }
    Ok(RuleBase::new(vec![in0, in1], out, rules)?)
}

impl LaneChangeModel {
    pub fn new(
        pressure: FuzzyVariable,
        gap_sat: FuzzyVariable,
        benefit: FuzzyVariable,
        opportunity: FuzzyVariable,
        intention: FuzzyVariable,
    ) -> Result<Self, DriverError> {
        for v in [&pressure, &gap_sat, &benefit, &opportunity, &intention] {
            assert_eq!(v.terms().len(), 3, "lane-change variables use three terms");
        }
        let lcn = build_base(pressure, gap_sat, intention.clone())?;
        let lco = build_base(benefit, opportunity, intention)?;
        Ok(Self { lcn, lco, lcn_lut: OnceLock::new(), lco_lut: OnceLock::new() })
    }

    pub fn default_model() -> Self {
        let unit = |name: &str, terms: &[&str; 3]| {
            FuzzyVariable::uniform_partition(name, 0.0, 1.0, terms).unwrap()
        };
        Self::new(
            unit("pressure", &PRESSURE_TERMS),
            unit("gap_satisfaction", &GAP_SAT_TERMS),
            unit("benefit", &BENEFIT_TERMS),
            unit("opportunity", &OPPORTUNITY_TERMS),
            unit("intention", &INTENTION_TERMS),
        )
        .unwrap()
    }

    pub fn lcn_base(&self) -> &RuleBase {
        &self.lcn
    }

    pub fn lco_base(&self) -> &RuleBase {
        &self.lco
    }

    /// Nearside-change intention from direct inference.
    pub fn lcn_intention(&self, pressure: f64, gap_sat: f64) -> f64 {
        self.lcn
            .infer_crisp_pair(pressure, gap_sat)
            .expect("inputs are clamped and the rule base is complete")
    }

    /// Offside-change intention from direct inference.
    pub fn lco_intention(&self, benefit: f64, opportunity: f64) -> f64 {
        self.lco
            .infer_crisp_pair(benefit, opportunity)
            .expect("inputs are clamped and the rule base is complete")
    }

    pub fn lcn_intention_fast(&self, pressure: f64, gap_sat: f64) -> f64 {
        let lut = self
            .lcn_lut
            .get_or_init(|| Lut2::build((0.0, 1.0), (0.0, 1.0), |x, y| self.lcn_intention(x, y)));
        lut.eval(pressure.clamp(0.0, 1.0), gap_sat.clamp(0.0, 1.0))
    }

    pub fn lco_intention_fast(&self, benefit: f64, opportunity: f64) -> f64 {
        let lut = self
            .lco_lut
            .get_or_init(|| Lut2::build((0.0, 1.0), (0.0, 1.0), |x, y| self.lco_intention(x, y)));
        lut.eval(benefit.clamp(0.0, 1.0), opportunity.clamp(0.0, 1.0))
    }
}

/// Free function mirror of [`LaneChangeModel::lcn_intention`].
pub fn lcn_intention(lc: &LaneChangeModel, pressure: f64, gap_sat: f64) -> f64 {
    lc.lcn_intention(pressure, gap_sat)
}

/// Free function mirror of [`LaneChangeModel::lco_intention`].
pub fn lco_intention(lc: &LaneChangeModel, benefit: f64, opportunity: f64) -> f64 {
    lc.lco_intention(benefit, opportunity)
}

/// Normalized pressure from the vehicle behind. `rear_dv` is own speed minus
/// the rear vehicle's speed, so it is negative while the rear vehicle closes
/// in; `None`-like absence is expressed by the caller passing no rear
/// context and using zero.
pub fn pressure_from_rear(rear_dv: f64, rear_gap: f64, p: &DriverParams) -> f64 {
    let closing = (-rear_dv).max(0.0);
    (closing * p.desired_time_headway / rear_gap.max(p.standstill_gap)).clamp(0.0, 1.0)
}

/// How well the target-lane gaps satisfy the desired gap at the current
/// speed; 1.0 when both gaps are at least the desired gap.
pub fn gap_satisfaction(lead_gap: f64, lag_gap: f64, p: &DriverParams, speed: f64) -> f64 {
    (lead_gap.min(lag_gap) / compute_desired_gap(p, speed)).clamp(0.0, 1.0)
}

/// Speed gain available by escaping an impeding leader, normalized by the
/// desired speed. A leader only impedes within twice the desired gap.
pub fn overtaking_benefit(p: &DriverParams, own_speed: f64, leader_speed: f64, lead_gap: f64) -> f64 {
    if lead_gap >= 2.0 * compute_desired_gap(p, own_speed) {
        return 0.0;
    }
    ((p.desired_speed - leader_speed.min(own_speed)) / p.desired_speed).clamp(0.0, 1.0)
}

/// Gap satisfaction applied to the offside lane.
pub fn overtaking_opportunity(
    lead_gap_offside: f64,
    lag_gap_offside: f64,
    p: &DriverParams,
    speed: f64,
) -> f64 {
    gap_satisfaction(lead_gap_offside, lag_gap_offside, p, speed)
}

/// Collision-freedom check against the lag vehicle in the target lane:
/// the gap must cover the standstill gap plus the lag vehicle's stopping
/// distance for its closing speed at comfortable deceleration.
pub fn safety_gap_check(lag_gap: f64, lag_dv: f64, p: &DriverParams) -> bool {
    let closing = (-lag_dv).max(0.0);
    lag_gap > p.standstill_gap + closing * closing / (2.0 * p.max_decel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaneChangeDirection {
    Nearside,
    Offside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaneChangeDecision {
    Stay,
    ToNearside,
    ToOffside,
}

#[derive(Debug, Clone, Copy)]
pub struct NeighborAhead {
    pub speed: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct NeighborBehind {
    /// Own speed minus the rear vehicle's speed.
    pub dv: f64,
    pub gap: f64,
}

/// Gaps seen in an adjacent lane at the vehicle's position. `lag_dv` is own
/// speed minus the lag vehicle's speed. Empty lanes use infinite gaps.
#[derive(Debug, Clone, Copy)]
pub struct AdjacentLane {
    pub lead_gap: f64,
    pub lag_gap: f64,
    pub lag_dv: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LaneChangeContext {
    pub own_speed: f64,
    pub leader: Option<NeighborAhead>,
    pub rear: Option<NeighborBehind>,
    pub nearside: Option<AdjacentLane>,
    pub offside: Option<AdjacentLane>,
    /// Route-required direction, if the current lane cannot serve the route.
    pub mandatory: Option<LaneChangeDirection>,
}

/// Combines both intention models with the safety check. A mandatory
/// direction carries full intention; it still cannot override a failed
/// safety check. Ties between triggered directions go nearside.
pub fn decide_lane_change(
    lc: &LaneChangeModel,
    ctx: &LaneChangeContext,
    p: &DriverParams,
) -> LaneChangeDecision {
    let near = ctx.nearside.map(|lane| {
        let intent = if ctx.mandatory == Some(LaneChangeDirection::Nearside) {
            1.0
        } else {
            let pressure = ctx.rear.map(|r| pressure_from_rear(r.dv, r.gap, p)).unwrap_or(0.0);
            lc.lcn_intention_fast(pressure, gap_satisfaction(lane.lead_gap, lane.lag_gap, p, ctx.own_speed))
        };
        (intent, safety_gap_check(lane.lag_gap, lane.lag_dv, p))
    });
    let off = ctx.offside.map(|lane| {
        let intent = if ctx.mandatory == Some(LaneChangeDirection::Offside) {
            1.0
        } else {
            let benefit = ctx
                .leader
                .map(|l| overtaking_benefit(p, ctx.own_speed, l.speed, l.gap))
                .unwrap_or(0.0);
            lc.lco_intention_fast(benefit, overtaking_opportunity(lane.lead_gap, lane.lag_gap, p, ctx.own_speed))
        };
        (intent, safety_gap_check(lane.lag_gap, lane.lag_dv, p))
    });

    let triggered = |c: Option<(f64, bool)>| match c {
        Some((intent, safe)) => safe && intent >= p.lc_intention_threshold,
        None => false,
    };
    match (triggered(near), triggered(off)) {
        (true, true) => match ctx.mandatory {
            Some(LaneChangeDirection::Offside) => LaneChangeDecision::ToOffside,
            Some(LaneChangeDirection::Nearside) => LaneChangeDecision::ToNearside,
            None => {
                if off.unwrap().0 > near.unwrap().0 {
                    LaneChangeDecision::ToOffside
                } else {
                    LaneChangeDecision::ToNearside
                }
            }
        },
        (true, false) => LaneChangeDecision::ToNearside,
        (false, true) => LaneChangeDecision::ToOffside,
        (false, false) => LaneChangeDecision::Stay,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model() -> LaneChangeModel {
        LaneChangeModel::default_model()
    }

    fn params() -> DriverParams {
        DriverParams::typical_motor()
    }

    #[test]
    fn pinned_intention_values() {
        let lc = model();
        // High pressure with no nearside room still carries medium intention.
        assert_relative_eq!(lc.lcn_intention(1.0, 0.0), 0.5, epsilon = 1e-9);
        // Full pressure and full room: the high term's defuzzified value.
        assert_relative_eq!(lc.lcn_intention(1.0, 1.0), 5.0 / 6.0, epsilon = 1e-4);
        // No pressure, no room: low.
        assert_relative_eq!(lc.lcn_intention(0.0, 0.0), 1.0 / 6.0, epsilon = 1e-4);
    }

    #[test]
    fn lco_diagonal_values() {
        let lc = model();
        assert_relative_eq!(lc.lco_intention(1.0, 1.0), 5.0 / 6.0, epsilon = 1e-4);
        assert_relative_eq!(lc.lco_intention(0.5, 0.5), 0.5, epsilon = 1e-9);
        assert_relative_eq!(lc.lco_intention(0.0, 0.0), 1.0 / 6.0, epsilon = 1e-4);
    }

    #[test]
    fn intentions_are_continuous() {
        let lc = model();
        let mut prev = lc.lcn_intention(0.0, 0.35);
        let mut x = 0.001;
        while x <= 1.0 {
            let v = lc.lcn_intention(x, 0.35);
            assert!((v - prev).abs() <= 0.05, "jump at {x}");
            prev = v;
            x += 0.001;
        }
        let mut prev = lc.lco_intention(0.61, 0.0);
        let mut y = 0.001;
        while y <= 1.0 {
            let v = lc.lco_intention(0.61, y);
            assert!((v - prev).abs() <= 0.05, "jump at {y}");
            prev = v;
            y += 0.001;
        }
    }

    #[test]
    fn pressure_examples() {
        let p = params();
        assert_eq!(pressure_from_rear(0.0, 20.0, &p), 0.0);
        assert_relative_eq!(pressure_from_rear(-5.0, 7.5, &p), 1.0);
        assert_relative_eq!(pressure_from_rear(-2.0, 30.0, &p), 0.1);
    }

    #[test]
    fn gap_satisfaction_examples() {
        let p = params();
        assert_eq!(gap_satisfaction(f64::INFINITY, f64::INFINITY, &p, 10.0), 1.0);
        assert_relative_eq!(gap_satisfaction(17.0, 20.0, &p, 10.0), 1.0);
        assert_relative_eq!(gap_satisfaction(8.5, 20.0, &p, 10.0), 0.5);
    }

    #[test]
    fn benefit_examples() {
        let p = params();
        // No impeding leader within range.
        assert_eq!(overtaking_benefit(&p, 10.0, 0.0, 100.0), 0.0);
        // Leader running at the desired speed takes the benefit to zero.
        assert_eq!(overtaking_benefit(&p, p.desired_speed, p.desired_speed, 10.0), 0.0);
        let mut p15 = p;
        p15.desired_speed = 15.0;
        assert_relative_eq!(overtaking_benefit(&p15, 10.0, 0.0, 10.0), 1.0);
    }

    #[test]
    fn safety_check_examples() {
        let p = params();
        assert!(safety_gap_check(f64::INFINITY, 0.0, &p));
        assert!(!safety_gap_check(0.0, 0.0, &p));
        // Closing at 5 m/s: boundary at 2 + 25/7.
        let bound = 2.0 + 25.0 / (2.0 * p.max_decel);
        assert!(safety_gap_check(bound + 0.01, -5.0, &p));
        assert!(!safety_gap_check(bound - 0.01, -5.0, &p));
    }

    #[test]
    fn decide_single_lane_stays() {
        let lc = model();
        let ctx = LaneChangeContext { own_speed: 10.0, ..Default::default() };
        assert_eq!(decide_lane_change(&lc, &ctx, &params()), LaneChangeDecision::Stay);
    }

    #[test]
    fn decide_pressured_with_room_goes_nearside() {
        let lc = model();
        let ctx = LaneChangeContext {
            own_speed: 10.0,
            rear: Some(NeighborBehind { dv: -6.0, gap: 8.0 }),
            nearside: Some(AdjacentLane {
                lead_gap: f64::INFINITY,
                lag_gap: f64::INFINITY,
                lag_dv: 0.0,
            }),
            ..Default::default()
        };
        assert_eq!(decide_lane_change(&lc, &ctx, &params()), LaneChangeDecision::ToNearside);
    }

    #[test]
    fn decide_safety_vetoes_offside() {
        let lc = model();
        let ctx = LaneChangeContext {
            own_speed: 5.0,
            leader: Some(NeighborAhead { speed: 0.0, gap: 6.0 }),
            offside: Some(AdjacentLane { lead_gap: 50.0, lag_gap: 1.0, lag_dv: -3.0 }),
            ..Default::default()
        };
        assert_eq!(decide_lane_change(&lc, &ctx, &params()), LaneChangeDecision::Stay);
    }

    #[test]
    fn mandatory_direction_wins_but_respects_safety() {
        let lc = model();
        let p = params();
        let open = AdjacentLane { lead_gap: f64::INFINITY, lag_gap: f64::INFINITY, lag_dv: 0.0 };
        let ctx = LaneChangeContext {
            own_speed: 10.0,
            rear: Some(NeighborBehind { dv: -6.0, gap: 8.0 }),
            nearside: Some(open),
            offside: Some(open),
            mandatory: Some(LaneChangeDirection::Offside),
            ..Default::default()
        };
        assert_eq!(decide_lane_change(&lc, &ctx, &p), LaneChangeDecision::ToOffside);

        let blocked = AdjacentLane { lead_gap: 50.0, lag_gap: 0.5, lag_dv: 0.0 };
        let ctx = LaneChangeContext {
            own_speed: 10.0,
            offside: Some(blocked),
            mandatory: Some(LaneChangeDirection::Offside),
            ..Default::default()
        };
        assert_eq!(decide_lane_change(&lc, &ctx, &p), LaneChangeDecision::Stay);
    }
}
