use thiserror::Error;

use crate::model::{DatumId, SatelliteId, StationId, WindowId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("priority {0} outside 1..=10")]
    PriorityOutOfRange(u8),
    #[error("mode `{0}` is not <segment|unsegment>:<rearrange|fofd>")]
    BadMode(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("horizon start must precede its end")]
    EmptyHorizon,
    #[error("antenna set-up time must be non-negative")]
    NegativeSetup,
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("dangling reference {0}")]
    Dangling(String),
    #[error("satellite {0} has a non-positive minimum segment duration")]
    NonPositiveD0(SatelliteId),
    #[error("station {0} has coordinates out of range")]
    BadCoordinates(StationId),
    #[error("window {0} is empty or leaves the horizon")]
    BadWindow(WindowId),
    #[error("datum {0} has a priority outside 1..=10")]
    BadPriority(DatumId),
    #[error("datum {0} has a due time inconsistent with its priority")]
    BadDue(DatumId),
    #[error("datum {0} is shorter than its satellite's minimum segment")]
    TooShort(DatumId),
    #[error("datum {0} is a segment of {1}; instances hold originals only")]
    SegmentRecord(DatumId, DatumId),
}

/// A schedule that references ids absent from the instance. Distinct from
/// constraint violations: nothing about feasibility can be said.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("schedule references unknown {0}")]
pub struct StructuralError(pub String);

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("task of {task} exceeds window length {window}")]
    TaskTooLong { task: crate::model::Millis, window: crate::model::Millis },
    #[error("gene {0} is outside [0, 1]")]
    GeneOutOfRange(f64),
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("schedule is infeasible ({0} violations)")]
    Infeasible(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("point ({0}, {1}) lies outside the reference box")]
    OutOfBox(f64, f64),
    #[error("front is empty")]
    EmptyFront,
    #[error("at least one sample is required")]
    NoSamples,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("malformed content: {0}")]
    Malformed(String),
    #[error("dangling id: {0}")]
    DanglingId(String),
    #[error("invalid instance: {0}")]
    Invalid(InstanceError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle handles at most {max_data} data and {max_windows} windows")]
    TooLarge { max_data: usize, max_windows: usize },
    #[error("grid must be positive")]
    BadGrid,
}
