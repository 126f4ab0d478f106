use super::{Phase, PhasePlan, SignalError};
use crate::network::{Approach, MovementClass, MovementId, Network, Turn, APPROACHES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinPlan {
    /// Four phases, one per approach: that approach's motor left and
    /// through run protected together with the parallel non-motor through;
    /// non-motor lefts are rerouted over two straight crossings.
    SplitByApproach,
    /// Four phases pairing opposing directions: through phases and
    /// protected left phases per street; non-motor lefts ride the left
    /// phase permissively.
    PairedDirections,
    /// Two phases, one per street, every movement permitted and all
    /// crossing movements permissive.
    TwoPhase,
}

impl BuiltinPlan {
    pub fn from_name(name: &str) -> Result<Self, SignalError> {
        match name {
            "plan1" => Ok(Self::SplitByApproach),
            "plan2" => Ok(Self::PairedDirections),
            "plan3" => Ok(Self::TwoPhase),
            other => Err(SignalError::UnknownPlan(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SplitByApproach => "plan1",
            Self::PairedDirections => "plan2",
            Self::TwoPhase => "plan3",
        }
    }

    pub fn phase_count(&self) -> usize {
        match self {
            Self::SplitByApproach | Self::PairedDirections => 4,
            Self::TwoPhase => 2,
        }
    }

    pub fn default_greens(&self) -> Vec<f64> {
        match self {
            Self::SplitByApproach => vec![25.0; 4],
            Self::PairedDirections => vec![30.0, 20.0, 30.0, 20.0],
            Self::TwoPhase => vec![45.0, 45.0],
        }
    }
}

struct Lookup<'a> {
    net: &'a Network,
}

impl Lookup<'_> {
    fn movement(
        &self,
        a: Approach,
        turn: Turn,
        class: MovementClass,
    ) -> Result<MovementId, SignalError> {
        self.net.find_movement(a, turn, class).ok_or_else(|| {
            SignalError::WrongNetworkShape(format!(
                "{}:{}:{}",
                a.label(),
                turn.label(),
                class.label()
            ))
        })
    }

    fn ped(&self, leg: Approach) -> Result<MovementId, SignalError> {
        self.net
            .pedestrian_stream(leg)
            .ok_or_else(|| SignalError::WrongNetworkShape(format!("ped:{}", leg.label())))
    }
}

/// Builds one of the three built-in plans for a standard cross network.
/// `greens` overrides the per-phase green durations when non-empty.
pub fn builtin_plan(
    which: BuiltinPlan,
    net: &Network,
    greens: &[f64],
    intergreen: f64,
) -> Result<PhasePlan, SignalError> {
    let greens = if greens.is_empty() {
        which.default_greens()
    } else {
        if greens.len() != which.phase_count() {
            return Err(SignalError::BadGreens {
                expected: which.phase_count(),
                got: greens.len(),
            });
        }
        greens.to_vec()
    };
    let lk = Lookup { net };
    let motor = MovementClass::Motor;
    let nm = MovementClass::NonMotor;

    let mut rights = Vec::new();
    for &a in &APPROACHES {
        rights.push(lk.movement(a, Turn::Right, motor)?);
        rights.push(lk.movement(a, Turn::Right, nm)?);
    }

    let plan = match which {
        BuiltinPlan::SplitByApproach => {
            let mut phases = Vec::with_capacity(4);
            for (k, &a) in APPROACHES.iter().enumerate() {
                phases.push(Phase {
                    green: greens[k],
                    permitted: vec![
                        lk.movement(a, Turn::Left, motor)?,
                        lk.movement(a, Turn::Through, motor)?,
                        lk.movement(a, Turn::Through, nm)?,
                        lk.ped(a.right_leg())?,
                    ],
                    permissive: vec![],
                });
            }
            let rerouted = APPROACHES
                .iter()
                .map(|&a| lk.movement(a, Turn::Left, nm))
                .collect::<Result<Vec<_>, _>>()?;
            PhasePlan {
                name: which.name().to_string(),
                phases,
                intergreen,
                offset: 0.0,
                always_permissive: rights,
                rerouted,
            }
        }
        BuiltinPlan::PairedDirections => {
            let street_through = |a: Approach, b: Approach,
                                  cross1: Approach,
                                  cross2: Approach|
             -> Result<Phase, SignalError> {
                Ok(Phase {
                    green: 0.0,
                    permitted: vec![
                        lk.movement(a, Turn::Through, motor)?,
                        lk.movement(b, Turn::Through, motor)?,
                        lk.movement(a, Turn::Through, nm)?,
                        lk.movement(b, Turn::Through, nm)?,
                        lk.ped(cross1)?,
                        lk.ped(cross2)?,
                    ],
                    permissive: vec![],
                })
            };
            let street_left = |a: Approach, b: Approach| -> Result<Phase, SignalError> {
                let nm_a = lk.movement(a, Turn::Left, nm)?;
                let nm_b = lk.movement(b, Turn::Left, nm)?;
                Ok(Phase {
                    green: 0.0,
                    permitted: vec![
                        lk.movement(a, Turn::Left, motor)?,
                        lk.movement(b, Turn::Left, motor)?,
                        nm_a,
                        nm_b,
                    ],
                    permissive: vec![nm_a, nm_b],
                })
            };
            let mut phases = vec![
                street_through(Approach::North, Approach::South, Approach::East, Approach::West)?,
                street_left(Approach::North, Approach::South)?,
                street_through(Approach::East, Approach::West, Approach::North, Approach::South)?,
                street_left(Approach::East, Approach::West)?,
            ];
            for (k, ph) in phases.iter_mut().enumerate() {
                ph.green = greens[k];
            }
            PhasePlan {
                name: which.name().to_string(),
                phases,
                intergreen,
                offset: 0.0,
                always_permissive: rights,
                rerouted: vec![],
            }
        }
        BuiltinPlan::TwoPhase => {
            let street = |a: Approach, b: Approach,
                          cross1: Approach,
                          cross2: Approach|
             -> Result<Phase, SignalError> {
                let mut permitted = Vec::new();
                let mut permissive = Vec::new();
                for &appr in &[a, b] {
                    for turn in [Turn::Left, Turn::Through, Turn::Right] {
                        for class in [motor, nm] {
                            let m = lk.movement(appr, turn, class)?;
                            permitted.push(m);
                            if turn != Turn::Through {
                                permissive.push(m);
                            }
                        }
                    }
                }
                permitted.push(lk.ped(cross1)?);
                permitted.push(lk.ped(cross2)?);
                Ok(Phase { green: 0.0, permitted, permissive })
            };
            let mut phases = vec![
                street(Approach::North, Approach::South, Approach::East, Approach::West)?,
                street(Approach::East, Approach::West, Approach::North, Approach::South)?,
            ];
            for (k, ph) in phases.iter_mut().enumerate() {
                ph.green = greens[k];
            }
            PhasePlan {
                name: which.name().to_string(),
                phases,
                intergreen,
                offset: 0.0,
                always_permissive: vec![],
                rerouted: vec![],
            }
        }
    };
    Ok(plan)
}
