//! Problem domain: instances, schedules, constraints and objectives.

mod objectives;
mod schedule;
mod time;
mod types;
mod validate;

pub use objectives::{
    evaluate, failure_rate, failure_rate_from, service_balance, service_balance_from, ObjectivePoint,
};
pub use schedule::{DownlinkTask, Schedule, SegmentationPlan};
pub use time::Millis;
pub use types::{
    due_time, DatumId, GroundStation, ImageData, Instance, Ordering, OrbitalElements, Satellite,
    SatelliteId, Segmentation, SolveMode, StationId, TaskId, TransmissionWindow, WindowId,
    DEFAULT_SIGMA,
};
pub use validate::{validate_schedule, Violation};

#[cfg(test)]
mod tests;
