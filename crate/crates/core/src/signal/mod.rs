//! Fixed-time signal plans: ordered phases with all-red intergreens, the
//! per-movement signal view the engine consumes, and the three built-in
//! plans for the standard cross intersection.

mod builtin;

pub use builtin::{builtin_plan, BuiltinPlan};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::network::{MovementId, Network};

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("unknown built-in plan '{0}'")]
    UnknownPlan(String),
    #[error("plan expects {expected} green durations, got {got}")]
    BadGreens { expected: usize, got: usize },
    #[error("network is not a standard cross (missing movement {0})")]
    WrongNetworkShape(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Phase {
    pub green: f64,
    /// Movements with a green indication in this phase.
    pub permitted: Vec<MovementId>,
    /// Subset of `permitted` that must yield at conflict points.
    pub permissive: Vec<MovementId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhasePlan {
    pub name: String,
    pub phases: Vec<Phase>,
    /// All-red clearance between consecutive phases, s.
    pub intergreen: f64,
    pub offset: f64,
    /// Movements that run permissive-green at every instant, signal state
    /// notwithstanding (uncontrolled right turns).
    pub always_permissive: Vec<MovementId>,
    /// Movements legally served by composite routing instead of a phase
    /// (non-motor lefts under the twice-crossing scheme).
    pub rerouted: Vec<MovementId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalInterval {
    Green(usize),
    Intergreen { after: usize },
}

#[derive(Debug, Clone)]
pub struct SignalState {
    pub interval: SignalInterval,
    /// Movements showing green right now, uncontrolled ones included.
    pub green: Vec<MovementId>,
    /// Green movements that must yield at conflict points.
    pub permissive: Vec<MovementId>,
}

/// Per-movement signal view at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovementSignal {
    Red,
    Protected,
    Permissive,
}

impl PhasePlan {
    pub fn cycle(&self) -> f64 {
        let greens: f64 = self.phases.iter().map(|p| p.green).sum();
        greens + self.phases.len() as f64 * self.intergreen
    }

    /// Position within the cycle for wall-clock time `t`.
    fn cycle_position(&self, t: f64) -> f64 {
        let cycle = self.cycle();
        ((t + self.offset) % cycle + cycle) % cycle
    }

    pub fn interval_at(&self, t: f64) -> SignalInterval {
        let mut pos = self.cycle_position(t);
        for (k, ph) in self.phases.iter().enumerate() {
            if pos < ph.green {
                return SignalInterval::Green(k);
            }
            pos -= ph.green;
            if pos < self.intergreen {
                return SignalInterval::Intergreen { after: k };
            }
            pos -= self.intergreen;
        }
        // Floating-point tail of the last intergreen.
        SignalInterval::Intergreen { after: self.phases.len() - 1 }
    }

    /// Active phase, green set and permissive set at time `t`. During an
    /// intergreen only the permanently permissive movements stay green.
    pub fn signal_state(&self, t: f64) -> SignalState {
        let interval = self.interval_at(t);
        let (mut green, mut permissive) = match interval {
            SignalInterval::Green(k) => (
                self.phases[k].permitted.clone(),
                self.phases[k].permissive.clone(),
            ),
            SignalInterval::Intergreen { .. } => (Vec::new(), Vec::new()),
        };
        for &m in &self.always_permissive {
            if !green.contains(&m) {
                green.push(m);
            }
            if !permissive.contains(&m) {
                permissive.push(m);
            }
        }
        SignalState { interval, green, permissive }
    }

    /// Per-movement view over all network movements, indexed by movement id.
    pub fn movement_states(&self, t: f64, n_movements: usize) -> Vec<MovementSignal> {
        let state = self.signal_state(t);
        let mut out = vec![MovementSignal::Red; n_movements];
        for &m in &state.green {
            out[m] = MovementSignal::Protected;
        }
        for &m in &state.permissive {
            out[m] = MovementSignal::Permissive;
        }
        out
    }

    /// Seconds of green left for `m` in the current phase; infinite for
    /// permanently permissive movements, zero when `m` is not green.
    pub fn remaining_green(&self, t: f64, m: MovementId) -> f64 {
        if self.always_permissive.contains(&m) {
            return f64::INFINITY;
        }
        if let SignalInterval::Green(k) = self.interval_at(t) {
            if self.phases[k].permitted.contains(&m) {
                let mut start = 0.0;
                for ph in &self.phases[..k] {
                    start += ph.green + self.intergreen;
                }
                return start + self.phases[k].green - self.cycle_position(t);
            }
        }
        0.0
    }

    /// Green seconds per cycle for a signal-controlled movement.
    pub fn accumulated_green(&self, m: MovementId) -> f64 {
        self.phases
            .iter()
            .filter(|p| p.permitted.contains(&m))
            .map(|p| p.green)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanViolation {
    NoPhases,
    NonPositiveGreen(usize),
    NegativeIntergreen,
    PermissiveNotPermitted(usize, MovementId),
    UnknownMovement(MovementId),
    UnservedMovement(MovementId),
    ProtectedConflict {
        phase: usize,
        a: MovementId,
        b: MovementId,
    },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanViolation::NoPhases => write!(f, "plan has no phases"),
            PlanViolation::NonPositiveGreen(k) => {
                write!(f, "phase {k} has a non-positive green duration")
            }
            PlanViolation::NegativeIntergreen => write!(f, "negative intergreen"),
            PlanViolation::PermissiveNotPermitted(k, m) => {
                write!(f, "phase {k}: permissive movement {m} is not permitted")
            }
            PlanViolation::UnknownMovement(m) => write!(f, "unknown movement {m}"),
            PlanViolation::UnservedMovement(m) => {
                write!(f, "movement {m} appears in no phase and is not rerouted")
            }
            PlanViolation::ProtectedConflict { phase, a, b } => {
                write!(f, "phase {phase}: protected movements {a} and {b} share a conflict point")
            }
        }
    }
}

/// Plan-level validation against a network: structural invariants plus the
/// rule that no two protected movements of one phase may share a conflict
/// point.
pub fn validate_plan(plan: &PhasePlan, net: &Network) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    if plan.phases.is_empty() {
        out.push(PlanViolation::NoPhases);
    }
    if plan.intergreen < 0.0 {
        out.push(PlanViolation::NegativeIntergreen);
    }
    let known = |m: MovementId| m < net.movements.len();
    for (k, ph) in plan.phases.iter().enumerate() {
        if !(ph.green > 0.0) {
            out.push(PlanViolation::NonPositiveGreen(k));
        }
        for &m in ph.permitted.iter().chain(&ph.permissive) {
            if !known(m) {
                out.push(PlanViolation::UnknownMovement(m));
            }
        }
        for &m in &ph.permissive {
            if !ph.permitted.contains(&m) {
                out.push(PlanViolation::PermissiveNotPermitted(k, m));
            }
        }
    }
    for &m in plan.always_permissive.iter().chain(&plan.rerouted) {
        if !known(m) {
            out.push(PlanViolation::UnknownMovement(m));
        }
    }
    for mv in &net.movements {
        let served = plan.phases.iter().any(|p| p.permitted.contains(&mv.id))
            || plan.always_permissive.contains(&mv.id)
            || plan.rerouted.contains(&mv.id);
        if !served {
            out.push(PlanViolation::UnservedMovement(mv.id));
        }
    }
    for (k, ph) in plan.phases.iter().enumerate() {
        let protected: Vec<MovementId> = ph
            .permitted
            .iter()
            .copied()
            .filter(|m| !ph.permissive.contains(m) && !plan.always_permissive.contains(m))
            .collect();
        for (i, &a) in protected.iter().enumerate() {
            for &b in &protected[i + 1..] {
                if net
                    .conflicts
                    .iter()
                    .any(|cp| cp.involves(a) && cp.involves(b))
                {
                    out.push(PlanViolation::ProtectedConflict { phase: k, a, b });
                }
            }
        }
    }
    out
}
