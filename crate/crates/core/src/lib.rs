//! Microscopic traffic simulation for an isolated signalized intersection.
//!
//! Driver behavior (car-following and lane-changing) is produced by fuzzy
//! rule bases; the engine advances a deterministic, seeded time-stepped
//! world over a cross intersection with mixed motor and non-motor traffic,
//! fixed-time signal plans, and conflict-point yielding. Measures of
//! effectiveness, plan comparison, and rolling assessment against loop
//! detector records sit on top of the run outputs.

pub mod driver;
pub mod network;
pub mod signal;
pub mod fuzzy;
