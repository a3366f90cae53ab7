use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::time::Millis;
use super::types::{DatumId, TaskId, WindowId};

/// A contiguous occupancy of part of one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DownlinkTask {
    pub id: TaskId,
    pub begin: Millis,
    pub end: Millis,
    pub duration: Millis,
    pub window: WindowId,
    /// Transmitted (datum, duration) pairs, in transmission order.
    pub d_set: Vec<(DatumId, Millis)>,
}

impl DownlinkTask {
    /// Start instant of each entry of `d_set`.
    pub fn offsets(&self) -> impl Iterator<Item = (DatumId, Millis, Millis)> + '_ {
        let mut at = self.begin;
        self.d_set.iter().map(move |&(id, dur)| {
            let start = at;
            at += dur;
            (id, start, dur)
        })
    }
}

/// How one original datum is cut across windows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationPlan {
    pub datum: DatumId,
    pub pieces: Vec<(WindowId, Millis)>,
}

impl SegmentationPlan {
    pub fn total(&self) -> Millis {
        self.pieces.iter().map(|p| p.1).sum()
    }
}

/// The decoded, id-referenced form of a solution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub tasks: Vec<DownlinkTask>,
    pub plans: Vec<SegmentationPlan>,
    pub scheduled: BTreeSet<DatumId>,
}

impl Schedule {
    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty() && self.scheduled.is_empty()
    }
}
