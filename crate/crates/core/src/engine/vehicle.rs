use serde::{Deserialize, Serialize};

use crate::driver::DriverParams;
use crate::network::{Approach, LinkId, MovementId, VehicleClass};

pub type VehicleId = u64;

/// Where a vehicle currently is. Positions are front-bumper distances from
/// the segment start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Entry {
        link: LinkId,
        lane: usize,
        pos: f64,
    },
    /// Traversing the intersection box along a movement path. `token` is
    /// the entry lane the vehicle came from; parallel through lanes keep
    /// separate single-file corridors.
    InBox {
        movement: MovementId,
        token: usize,
        pos: f64,
    },
    /// Parked in a twice-crossing waiting area for the second leg.
    Waiting { next_movement: MovementId },
    Exit {
        link: LinkId,
        lane: usize,
        pos: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Vehicle {
    pub id: VehicleId,
    pub class: VehicleClass,
    /// Movement the vehicle is reported under (the original route).
    pub movement: MovementId,
    /// Movements actually traversed; two entries for twice-crossing lefts.
    pub legs: Vec<MovementId>,
    pub leg_idx: usize,
    pub segment: Segment,
    pub speed: f64,
    pub accel: f64,
    /// Fuzzy target acceleration held between decision instants.
    pub decided_accel: f64,
    pub next_decision: f64,
    pub params: DriverParams,
    pub length: f64,
    pub max_speed: f64,
    pub entry_time: f64,
    pub buffered_wait: f64,
    pub distance: f64,
    pub stop_count: u32,
    pub stopped_time: f64,
    pub is_stopped: bool,
    pub lc_lockout_until: f64,
}

impl Vehicle {
    pub fn current_leg(&self) -> MovementId {
        self.legs[self.leg_idx]
    }
}

/// Final per-vehicle trip record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VehicleRecord {
    pub id: VehicleId,
    pub class: VehicleClass,
    pub movement: MovementId,
    pub approach: Approach,
    pub entry_time: f64,
    pub exit_time: f64,
    pub distance: f64,
    pub free_flow_time: f64,
    pub stop_count: u32,
    pub stopped_time: f64,
}

impl VehicleRecord {
    pub fn travel_time(&self) -> f64 {
        self.exit_time - self.entry_time
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Spawned,
    BufferedArrival,
    EnteredBox,
    BeganWaiting,
    ResumedFromWaiting,
    LaneChanged,
    Exited,
    RedLineOvershoot,
}

/// Line-streamable transition record for debugging and plotting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub vehicle: VehicleId,
    pub kind: EventKind,
    pub location: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QueueSample {
    pub t: f64,
    pub approach: Approach,
    pub count: u32,
}
