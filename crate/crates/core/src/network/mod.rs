//! Static description of the intersection: links and lanes, turning
//! movements with their paths through the box, and conflict points between
//! movements.

mod factory;
mod geometry;

pub use factory::{standard_cross_intersection, CrossConfig};
pub use geometry::{quarter_turn, straight, PolyPath};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub type LinkId = usize;
pub type MovementId = usize;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("unknown movement id {0}")]
    UnknownMovement(MovementId),
    #[error("standard cross intersection needs at least one motor lane per approach")]
    NoLanes,
    #[error("geometry parameter '{0}' must be positive, got {1}")]
    BadGeometry(&'static str, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VehicleClass {
    Motor,
    NonMotor,
}

impl VehicleClass {
    pub fn label(self) -> &'static str {
        match self {
            VehicleClass::Motor => "motor",
            VehicleClass::NonMotor => "non_motor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MovementClass {
    Motor,
    NonMotor,
    PedestrianStream,
}

impl MovementClass {
    pub fn label(self) -> &'static str {
        match self {
            MovementClass::Motor => "motor",
            MovementClass::NonMotor => "non_motor",
            MovementClass::PedestrianStream => "pedestrian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Left,
    Through,
    Right,
}

impl Turn {
    pub fn label(self) -> &'static str {
        match self {
            Turn::Left => "left",
            Turn::Through => "through",
            Turn::Right => "right",
        }
    }
}

/// Compass label of an entry leg; vehicles from the South approach travel
/// northbound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    North,
    East,
    South,
    West,
}

pub const APPROACHES: [Approach; 4] =
    [Approach::North, Approach::East, Approach::South, Approach::West];

impl Approach {
    pub fn label(self) -> &'static str {
        match self {
            Approach::North => "N",
            Approach::East => "E",
            Approach::South => "S",
            Approach::West => "W",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Approach::North => Approach::South,
            Approach::South => Approach::North,
            Approach::East => Approach::West,
            Approach::West => Approach::East,
        }
    }

    /// Leg a right turn from this approach exits onto.
    pub fn right_leg(self) -> Self {
        match self {
            Approach::South => Approach::East,
            Approach::East => Approach::North,
            Approach::North => Approach::West,
            Approach::West => Approach::South,
        }
    }

    pub fn left_leg(self) -> Self {
        self.right_leg().opposite()
    }

    /// Inbound unit travel direction of vehicles entering from this leg.
    pub fn heading(self) -> (f64, f64) {
        match self {
            Approach::South => (0.0, 1.0),
            Approach::North => (0.0, -1.0),
            Approach::East => (-1.0, 0.0),
            Approach::West => (1.0, 0.0),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ClassMask {
    pub motor: bool,
    pub non_motor: bool,
}

impl ClassMask {
    pub fn contains(&self, c: VehicleClass) -> bool {
        match c {
            VehicleClass::Motor => self.motor,
            VehicleClass::NonMotor => self.non_motor,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.motor && !self.non_motor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TurnMask {
    pub left: bool,
    pub through: bool,
    pub right: bool,
}

impl TurnMask {
    pub fn contains(&self, t: Turn) -> bool {
        match t {
            Turn::Left => self.left,
            Turn::Through => self.through,
            Turn::Right => self.right,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.left && !self.through && !self.right
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lane {
    pub width: f64,
    pub allowed_classes: ClassMask,
    pub allowed_turns: TurnMask,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Entry,
    Exit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Link {
    pub id: LinkId,
    pub length: f64,
    /// Nearside (curb) lane first.
    pub lanes: Vec<Lane>,
    pub speed_limit: f64,
    pub approach: Approach,
    pub kind: LinkKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Movement {
    pub id: MovementId,
    pub from_link: LinkId,
    pub from_lanes: Vec<usize>,
    pub to_link: LinkId,
    pub turn: Turn,
    pub class: MovementClass,
    pub approach: Approach,
    /// Path from the stop line through the box to the start of the exit
    /// link, in plan coordinates.
    pub path: PolyPath,
    /// Lane index on `to_link` the movement merges into.
    pub exit_lane: usize,
    pub speed_limit: f64,
}

impl Movement {
    /// Priority rank at conflict points; lower proceeds, higher yields.
    pub fn priority_rank(&self) -> u8 {
        match (self.class, self.turn) {
            (MovementClass::PedestrianStream, _) => 0,
            (MovementClass::NonMotor, Turn::Through) => 1,
            (MovementClass::Motor, Turn::Through) => 2,
            (MovementClass::NonMotor, Turn::Right) => 3,
            (MovementClass::Motor, Turn::Right) => 4,
            (MovementClass::NonMotor, Turn::Left) => 5,
            (MovementClass::Motor, Turn::Left) => 6,
        }
    }

    pub fn key(&self) -> String {
        format!("{}:{}:{}", self.approach.label(), self.turn.label(), self.class.label())
    }
}

/// Crossing of two movement paths. Registered once per unordered pair;
/// `priority` names the movement that proceeds when both are permitted
/// and neither holds a protected green.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConflictPoint {
    pub movement_a: MovementId,
    pub movement_b: MovementId,
    /// Distance along each movement's path from its stop line.
    pub pos_a: f64,
    pub pos_b: f64,
    pub priority: MovementId,
}

impl ConflictPoint {
    pub fn involves(&self, m: MovementId) -> bool {
        self.movement_a == m || self.movement_b == m
    }

    pub fn other(&self, m: MovementId) -> MovementId {
        if self.movement_a == m {
            self.movement_b
        } else {
            self.movement_a
        }
    }

    pub fn pos_of(&self, m: MovementId) -> f64 {
        if self.movement_a == m {
            self.pos_a
        } else {
            self.pos_b
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Network {
    pub links: Vec<Link>,
    pub movements: Vec<Movement>,
    pub conflicts: Vec<ConflictPoint>,
}

impl Network {
    pub fn entry_link(&self, a: Approach) -> &Link {
        self.links
            .iter()
            .find(|l| l.approach == a && l.kind == LinkKind::Entry)
            .expect("standard networks carry one entry link per approach")
    }

    pub fn exit_link(&self, a: Approach) -> &Link {
        self.links
            .iter()
            .find(|l| l.approach == a && l.kind == LinkKind::Exit)
            .expect("standard networks carry one exit link per approach")
    }

    pub fn find_movement(
        &self,
        approach: Approach,
        turn: Turn,
        class: MovementClass,
    ) -> Option<MovementId> {
        self.movements
            .iter()
            .find(|m| m.approach == approach && m.turn == turn && m.class == class)
            .map(|m| m.id)
    }

    pub fn pedestrian_stream(&self, leg: Approach) -> Option<MovementId> {
        self.movements
            .iter()
            .find(|m| m.approach == leg && m.class == MovementClass::PedestrianStream)
            .map(|m| m.id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BadLink(LinkId, String),
    BadMovement(MovementId, String),
    BadConflict(usize, String),
    EntryWithoutMovements(LinkId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadLink(id, why) => write!(f, "link {id}: {why}"),
            Violation::BadMovement(id, why) => write!(f, "movement {id}: {why}"),
            Violation::BadConflict(i, why) => write!(f, "conflict {i}: {why}"),
            Violation::EntryWithoutMovements(id) => {
                write!(f, "entry link {id} has no movements")
            }
        }
    }
}

/// Structural validation; returns every violation found, never a partial
/// acceptance.
pub fn validate_network(net: &Network) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, link) in net.links.iter().enumerate() {
        if link.id != i {
            out.push(Violation::BadLink(link.id, format!("id does not match index {i}")));
        }
        if !(link.length > 0.0) {
            out.push(Violation::BadLink(link.id, format!("non-positive length {}", link.length)));
        }
        if link.lanes.is_empty() {
            out.push(Violation::BadLink(link.id, "no lanes".into()));
        }
        for (li, lane) in link.lanes.iter().enumerate() {
            if lane.allowed_classes.is_empty() {
                out.push(Violation::BadLink(link.id, format!("lane {li} allows no classes")));
            }
            if lane.allowed_turns.is_empty() {
                out.push(Violation::BadLink(link.id, format!("lane {li} allows no turns")));
            }
        }
    }
    for (i, m) in net.movements.iter().enumerate() {
        if m.id != i {
            out.push(Violation::BadMovement(m.id, format!("id does not match index {i}")));
        }
        let from = net.links.get(m.from_link);
        if from.is_none() {
            out.push(Violation::BadMovement(m.id, format!("missing from_link {}", m.from_link)));
        }
        if net.links.get(m.to_link).is_none() {
            out.push(Violation::BadMovement(m.id, format!("missing to_link {}", m.to_link)));
        }
        if !(m.path.length() > 0.0) {
            out.push(Violation::BadMovement(m.id, "empty path".into()));
        }
        if m.class != MovementClass::PedestrianStream {
            if m.from_lanes.is_empty() {
                out.push(Violation::BadMovement(m.id, "no departure lanes".into()));
            }
            if let Some(from) = from {
                for &li in &m.from_lanes {
                    match from.lanes.get(li) {
                        None => out.push(Violation::BadMovement(
                            m.id,
                            format!("departure lane {li} does not exist"),
                        )),
                        Some(lane) if !lane.allowed_turns.contains(m.turn) => {
                            out.push(Violation::BadMovement(
                                m.id,
                                format!("lane {li} does not allow {}", m.turn.label()),
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    for (i, cp) in net.conflicts.iter().enumerate() {
        if cp.movement_a == cp.movement_b {
            out.push(Violation::BadConflict(i, "self conflict".into()));
        }
        for (mid, pos) in [(cp.movement_a, cp.pos_a), (cp.movement_b, cp.pos_b)] {
            match net.movements.get(mid) {
                None => out.push(Violation::BadConflict(i, format!("missing movement {mid}"))),
                Some(m) if pos < 0.0 || pos > m.path.length() => out.push(Violation::BadConflict(
                    i,
                    format!("position {pos:.2} outside path of movement {mid}"),
                )),
                _ => {}
            }
        }
        if net.conflicts[..i].iter().any(|other| {
            (other.movement_a == cp.movement_a && other.movement_b == cp.movement_b)
                || (other.movement_a == cp.movement_b && other.movement_b == cp.movement_a)
        }) {
            out.push(Violation::BadConflict(i, "pair registered more than once".into()));
        }
    }
    for link in &net.links {
        if link.kind == LinkKind::Entry
            && !net.movements.iter().any(|m| {
                m.from_link == link.id && m.class != MovementClass::PedestrianStream
            })
        {
            out.push(Violation::EntryWithoutMovements(link.id));
        }
    }
    out
}

/// All registered conflicts involving `m`, seen from `m`'s side.
pub fn conflicting_movements(
    net: &Network,
    m: MovementId,
) -> Result<Vec<(MovementId, &ConflictPoint)>, NetworkError> {
    if m >= net.movements.len() {
        return Err(NetworkError::UnknownMovement(m));
    }
    Ok(net
        .conflicts
        .iter()
        .filter(|cp| cp.involves(m))
        .map(|cp| (cp.other(m), cp))
        .collect())
}
