use serde::{Deserialize, Serialize};

use super::geometry::{quarter_turn, PolyPath};
use super::{
    Approach, ClassMask, ConflictPoint, Lane, Link, LinkKind, Movement, MovementClass,
    MovementId, Network, NetworkError, Turn, TurnMask, APPROACHES,
};

/// Distance from the stop line to the intersection box edge; the crosswalk
/// band sits inside it.
pub const STOPLINE_SETBACK: f64 = 4.0;
const CROSSWALK_OFFSET: f64 = 2.0;
const CROSSWALK_OVERHANG: f64 = 1.0;
const TURN_SAMPLES: usize = 48;

/// Parameters for the built-in four-approach cross intersection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrossConfig {
    /// Motor lanes per entry approach; a curbside non-motor lane is always
    /// added on top of these.
    pub lanes_per_approach: usize,
    pub approach_length: f64,
    pub exit_length: f64,
    pub lane_width: f64,
    pub non_motor_lane_width: f64,
    pub speed_limit: f64,
    pub non_motor_speed_limit: f64,
}

impl Default for CrossConfig {
    fn default() -> Self {
        Self {
            lanes_per_approach: 2,
            approach_length: 200.0,
            exit_length: 100.0,
            lane_width: 3.5,
            non_motor_lane_width: 2.5,
            speed_limit: 13.9,
            non_motor_speed_limit: 6.0,
        }
    }
}

/// Point on a leg: `long` is the distance from the intersection center along
/// the leg, `lat_rh` the lateral offset on the right-hand side of INBOUND
/// travel (negative values are the exit half of the roadway).
fn leg_point(leg: Approach, long: f64, lat_rh: f64) -> (f64, f64) {
    let d = leg.heading();
    let r = (d.1, -d.0);
    (-d.0 * long + r.0 * lat_rh, -d.1 * long + r.1 * lat_rh)
}

struct Geometry {
    half_width: f64,
    nm_lat: f64,
    motor_lats: Vec<f64>,
}

impl Geometry {
    fn new(cfg: &CrossConfig) -> Self {
        let half_width = cfg.non_motor_lane_width + cfg.lanes_per_approach as f64 * cfg.lane_width;
        let nm_lat = half_width - cfg.non_motor_lane_width / 2.0;
        let motor_lats = (0..cfg.lanes_per_approach)
            .map(|k| {
                half_width - cfg.non_motor_lane_width - cfg.lane_width * (k as f64 + 0.5)
            })
            .collect();
        Self { half_width, nm_lat, motor_lats }
    }
}

fn build_path(
    geo: &Geometry,
    approach: Approach,
    exit_leg: Approach,
    lat_in: f64,
    lat_out: f64,
) -> PolyPath {
    let w = geo.half_width;
    let start = leg_point(approach, w + STOPLINE_SETBACK, lat_in);
    let edge_in = leg_point(approach, w, lat_in);
    let edge_out = leg_point(exit_leg, w, -lat_out);
    let end = leg_point(exit_leg, w + STOPLINE_SETBACK, -lat_out);
    let mut pts = vec![start, edge_in];
    if exit_leg == approach.opposite() {
        pts.push(edge_out);
    } else {
        let turn = quarter_turn(edge_in, edge_out, approach.heading(), TURN_SAMPLES);
        pts.extend(turn.into_iter().skip(1));
    }
    pts.push(end);
    PolyPath::new(pts)
}

fn exit_leg_for(approach: Approach, turn: Turn) -> Approach {
    match turn {
        Turn::Through => approach.opposite(),
        Turn::Right => approach.right_leg(),
        Turn::Left => approach.left_leg(),
    }
}

/// Generator for the four-approach cross: entry/exit links per leg, the
/// twelve motor and twelve non-motor movements, four pedestrian crossing
/// streams, and the conflict points computed from exact path crossings.
pub fn standard_cross_intersection(cfg: &CrossConfig) -> Result<Network, NetworkError> {
    if cfg.lanes_per_approach == 0 {
        return Err(NetworkError::NoLanes);
    }
    for (name, v) in [
        ("approach_length", cfg.approach_length),
        ("exit_length", cfg.exit_length),
        ("lane_width", cfg.lane_width),
        ("non_motor_lane_width", cfg.non_motor_lane_width),
        ("speed_limit", cfg.speed_limit),
        ("non_motor_speed_limit", cfg.non_motor_speed_limit),
    ] {
        if !(v > 0.0) {
            return Err(NetworkError::BadGeometry(name, v));
        }
    }
    let geo = Geometry::new(cfg);
    let n = cfg.lanes_per_approach;

    let make_lanes = |cfg: &CrossConfig| {
        let mut lanes = vec![Lane {
            width: cfg.non_motor_lane_width,
            allowed_classes: ClassMask { motor: false, non_motor: true },
            allowed_turns: TurnMask { left: true, through: true, right: true },
        }];
        for k in 0..n {
            let turns = if n == 1 {
                TurnMask { left: true, through: true, right: true }
            } else if k == 0 {
                TurnMask { left: false, through: true, right: true }
            } else if k == n - 1 {
                TurnMask { left: true, through: n == 2, right: false }
            } else {
                TurnMask { left: false, through: true, right: false }
            };
            lanes.push(Lane {
                width: cfg.lane_width,
                allowed_classes: ClassMask { motor: true, non_motor: false },
                allowed_turns: turns,
            });
        }
        lanes
    };

    let mut links = Vec::with_capacity(8);
    for &a in &APPROACHES {
        links.push(Link {
            id: links.len(),
            length: cfg.approach_length,
            lanes: make_lanes(cfg),
            speed_limit: cfg.speed_limit,
            approach: a,
            kind: LinkKind::Entry,
        });
        links.push(Link {
            id: links.len(),
            length: cfg.exit_length,
            lanes: make_lanes(cfg),
            speed_limit: cfg.speed_limit,
            approach: a,
            kind: LinkKind::Exit,
        });
    }
    let entry_id = |a: Approach| APPROACHES.iter().position(|&x| x == a).unwrap() * 2;
    let exit_id = |a: Approach| entry_id(a) + 1;

    // Motor departure lanes per turn (link lane indices; 0 is the non-motor
    // lane).
    let motor_lanes_for = |turn: Turn| -> Vec<usize> {
        match turn {
            _ if n == 1 => vec![1],
            Turn::Right => vec![1],
            Turn::Left => vec![n],
            Turn::Through => {
                if n == 2 {
                    vec![1, 2]
                } else {
                    (1..n).collect()
                }
            }
        }
    };
    // Representative box path lateral per turn.
    let motor_lat_for = |turn: Turn| -> f64 {
        match turn {
            Turn::Right | Turn::Through => geo.motor_lats[0],
            Turn::Left => geo.motor_lats[n - 1],
        }
    };
    let motor_exit_lane = |turn: Turn| -> usize {
        match turn {
            Turn::Right | Turn::Through => 1,
            Turn::Left => n,
        }
    };

    let mut movements: Vec<Movement> = Vec::new();
    for &a in &APPROACHES {
        for turn in [Turn::Left, Turn::Through, Turn::Right] {
            let exit = exit_leg_for(a, turn);
            let lat = motor_lat_for(turn);
            movements.push(Movement {
                id: movements.len(),
                from_link: entry_id(a),
                from_lanes: motor_lanes_for(turn),
                to_link: exit_id(exit),
                turn,
                class: MovementClass::Motor,
                approach: a,
                path: build_path(&geo, a, exit, lat, motor_lat_for(turn)),
                exit_lane: motor_exit_lane(turn),
                speed_limit: match turn {
                    Turn::Through => cfg.speed_limit,
                    Turn::Left => cfg.speed_limit.min(7.0),
                    Turn::Right => cfg.speed_limit.min(5.5),
                },
            });
        }
        for turn in [Turn::Left, Turn::Through, Turn::Right] {
            let exit = exit_leg_for(a, turn);
            movements.push(Movement {
                id: movements.len(),
                from_link: entry_id(a),
                from_lanes: vec![0],
                to_link: exit_id(exit),
                turn,
                class: MovementClass::NonMotor,
                approach: a,
                path: build_path(&geo, a, exit, geo.nm_lat, geo.nm_lat),
                exit_lane: 0,
                speed_limit: cfg.non_motor_speed_limit,
            });
        }
    }
    for &leg in &APPROACHES {
        let w = geo.half_width;
        let lat = w + CROSSWALK_OVERHANG;
        let path = PolyPath::new(vec![
            leg_point(leg, w + CROSSWALK_OFFSET, -lat),
            leg_point(leg, w + CROSSWALK_OFFSET, lat),
        ]);
        movements.push(Movement {
            id: movements.len(),
            from_link: entry_id(leg),
            from_lanes: vec![],
            to_link: exit_id(leg),
            turn: Turn::Through,
            class: MovementClass::PedestrianStream,
            approach: leg,
            path,
            exit_lane: 0,
            speed_limit: 1.3,
        });
    }

    let mut conflicts = Vec::new();
    for a in 0..movements.len() {
        for b in a + 1..movements.len() {
            let (ma, mb) = (&movements[a], &movements[b]);
            let both_ped = ma.class == MovementClass::PedestrianStream
                && mb.class == MovementClass::PedestrianStream;
            let neither_ped = ma.class != MovementClass::PedestrianStream
                && mb.class != MovementClass::PedestrianStream;
            // Streams merging into the same exit link interact by
            // car-following on the exit lanes, not at a conflict point.
            if both_ped || (neither_ped && ma.to_link == mb.to_link) {
                continue;
            }
            if let Some((pos_a, pos_b)) = ma.path.first_crossing(&mb.path) {
                let priority = pick_priority(ma, mb);
                conflicts.push(ConflictPoint {
                    movement_a: a,
                    movement_b: b,
                    pos_a,
                    pos_b,
                    priority,
                });
            }
        }
    }

    Ok(Network { links, movements, conflicts })
}

fn pick_priority(a: &Movement, b: &Movement) -> MovementId {
    match a.priority_rank().cmp(&b.priority_rank()) {
        std::cmp::Ordering::Less => a.id,
        std::cmp::Ordering::Greater => b.id,
        std::cmp::Ordering::Equal => a.id.min(b.id),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{conflicting_movements, validate_network};

    fn net() -> Network {
        standard_cross_intersection(&CrossConfig::default()).unwrap()
    }

    #[test]
    fn movement_census() {
        let net = net();
        let motor = net
            .movements
            .iter()
            .filter(|m| m.class == MovementClass::Motor)
            .count();
        let nm = net
            .movements
            .iter()
            .filter(|m| m.class == MovementClass::NonMotor)
            .count();
        let ped = net
            .movements
            .iter()
            .filter(|m| m.class == MovementClass::PedestrianStream)
            .count();
        assert_eq!((motor, nm, ped), (12, 12, 4));
    }

    #[test]
    fn single_lane_approach_still_serves_all_turns() {
        let net = standard_cross_intersection(&CrossConfig {
            lanes_per_approach: 1,
            ..CrossConfig::default()
        })
        .unwrap();
        let motor = net
            .movements
            .iter()
            .filter(|m| m.class == MovementClass::Motor)
            .count();
        assert_eq!(motor, 12);
        assert!(validate_network(&net).is_empty());
    }

    #[test]
    fn zero_lanes_is_an_error() {
        let err = standard_cross_intersection(&CrossConfig {
            lanes_per_approach: 0,
            ..CrossConfig::default()
        });
        assert!(matches!(err, Err(NetworkError::NoLanes)));
    }

    #[test]
    fn built_in_cross_validates_clean() {
        assert!(validate_network(&net()).is_empty());
    }

    #[test]
    fn perpendicular_throughs_conflict_opposing_do_not() {
        let net = net();
        let eb = net
            .find_movement(Approach::West, Turn::Through, MovementClass::Motor)
            .unwrap();
        let nb = net
            .find_movement(Approach::South, Turn::Through, MovementClass::Motor)
            .unwrap();
        let wb = net
            .find_movement(Approach::East, Turn::Through, MovementClass::Motor)
            .unwrap();
        let eb_conf = conflicting_movements(&net, eb).unwrap();
        assert!(eb_conf.iter().any(|(m, _)| *m == nb));
        assert!(!eb_conf.iter().any(|(m, _)| *m == wb));
    }

    #[test]
    fn opposing_motor_and_non_motor_lefts_conflict() {
        let net = net();
        let wb_left = net
            .find_movement(Approach::East, Turn::Left, MovementClass::Motor)
            .unwrap();
        let eb_left_nm = net
            .find_movement(Approach::West, Turn::Left, MovementClass::NonMotor)
            .unwrap();
        let confs = conflicting_movements(&net, wb_left).unwrap();
        assert!(confs.iter().any(|(m, _)| *m == eb_left_nm));
    }

    #[test]
    fn right_turns_cross_their_own_non_motor_through() {
        let net = net();
        let r = net
            .find_movement(Approach::South, Turn::Right, MovementClass::Motor)
            .unwrap();
        let nm_t = net
            .find_movement(Approach::South, Turn::Through, MovementClass::NonMotor)
            .unwrap();
        let confs = conflicting_movements(&net, r).unwrap();
        let hit = confs.iter().find(|(m, _)| *m == nm_t);
        assert!(hit.is_some());
        // The non-motor through has priority over the turning vehicle.
        assert_eq!(hit.unwrap().1.priority, nm_t);
    }

    #[test]
    fn pedestrian_streams_gate_exiting_and_entering_movements() {
        let net = net();
        let ped_e = net.pedestrian_stream(Approach::East).unwrap();
        let nb_r = net
            .find_movement(Approach::South, Turn::Right, MovementClass::Motor)
            .unwrap();
        let confs = conflicting_movements(&net, ped_e).unwrap();
        assert!(confs.iter().any(|(m, _)| *m == nb_r));
        // Entering from the East leg crosses the East crosswalk too.
        let wb_t = net
            .find_movement(Approach::East, Turn::Through, MovementClass::Motor)
            .unwrap();
        assert!(confs.iter().any(|(m, _)| *m == wb_t));
    }

    #[test]
    fn conflicts_are_symmetric_and_irreflexive() {
        let net = net();
        for cp in &net.conflicts {
            assert_ne!(cp.movement_a, cp.movement_b);
        }
        for m in 0..net.movements.len() {
            for (other, cp) in conflicting_movements(&net, m).unwrap() {
                assert!(conflicting_movements(&net, other)
                    .unwrap()
                    .iter()
                    .any(|(back, cp2)| *back == m && std::ptr::eq(*cp2, cp)));
            }
        }
    }

    #[test]
    fn unknown_movement_is_an_error() {
        let net = net();
        assert!(conflicting_movements(&net, 999).is_err());
    }

    #[test]
    fn corrupt_networks_are_reported() {
        let mut broken = net();
        broken.movements[0].from_link = 99;
        let v = validate_network(&broken);
        assert!(v.iter().any(|x| matches!(x, Violation::BadMovement(0, _))));

        let mut broken2 = net();
        broken2.conflicts[0].pos_a = 1e9;
        let v2 = validate_network(&broken2);
        assert!(v2.iter().any(|x| matches!(x, Violation::BadConflict(0, _))));
    }

    use crate::network::Violation;
}
