//! The constraint system. Every solver in the crate is checked against
//! [`validate_schedule`]; nothing else decides feasibility.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::schedule::Schedule;
use super::time::Millis;
use super::types::{DatumId, Instance, SolveMode, TaskId, WindowId};
use crate::error::StructuralError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// Task leaves its window.
    VisibleTime { task: TaskId },
    /// Task shorter than the satellite's d0 or longer than its window.
    WorkTime { task: TaskId },
    /// `end != begin + duration` or `duration != Σ d_set`.
    TaskArithmetic { task: TaskId },
    /// A datum transmitted through a window of another satellite.
    SatelliteMismatch { task: TaskId, datum: DatumId },
    /// Task begins before the datum's release or at/after its expiry.
    LogicalTime { task: TaskId, datum: DatumId },
    /// Adjacent same-station tasks of different satellites closer than σ.
    SetupTime { first: TaskId, second: TaskId },
    /// Two tasks at one station overlap.
    StationOverlap { first: TaskId, second: TaskId },
    /// Two tasks of one satellite overlap.
    SatelliteOverlap { first: TaskId, second: TaskId },
    /// More than one task in a single window.
    SharedWindow { window: WindowId },
    /// A scheduled datum whose segments do not add up to its duration.
    IncompleteTransmission { datum: DatumId, transmitted: Millis },
    /// Segments of a datum that is not marked scheduled.
    PartialTransmission { datum: DatumId },
    /// A segment shorter than d0.
    SegmentTooShort { datum: DatumId, window: WindowId, duration: Millis },
    /// The same datum listed twice in one task, or sent beyond its duration.
    RepeatedTransmission { datum: DatumId },
    /// More than one segment while segmentation is disabled.
    Segmented { datum: DatumId },
    /// A later-released datum of the same satellite transmitted before an
    /// earlier one has finished.
    ReleaseOrder { earlier: DatumId, later: DatumId },
    /// The per-datum plans disagree with the tasks.
    PlanMismatch { datum: DatumId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            VisibleTime { task } => write!(f, "visible time: {task} leaves its window"),
            WorkTime { task } => write!(f, "work time: {task} duration out of bounds"),
            TaskArithmetic { task } => write!(f, "task arithmetic: {task} end/duration inconsistent"),
            SatelliteMismatch { task, datum } => {
                write!(f, "satellite mismatch: {datum} in {task} belongs to another satellite")
            }
            LogicalTime { task, datum } => {
                write!(f, "logical time: {task} begins outside the validity window of {datum}")
            }
            SetupTime { first, second } => write!(f, "set-up time: gap {first} -> {second} below sigma"),
            StationOverlap { first, second } => write!(f, "station overlap: {first} and {second}"),
            SatelliteOverlap { first, second } => write!(f, "satellite overlap: {first} and {second}"),
            SharedWindow { window } => write!(f, "window {window} carries more than one task"),
            IncompleteTransmission { datum, transmitted } => {
                write!(f, "completed transmission: {datum} only sends {transmitted}")
            }
            PartialTransmission { datum } => write!(f, "unscheduled {datum} has transmitted segments"),
            SegmentTooShort { datum, window, duration } => {
                write!(f, "minimum segment: {datum} sends {duration} in {window}")
            }
            RepeatedTransmission { datum } => write!(f, "at most once: {datum} transmitted repeatedly"),
            Segmented { datum } => write!(f, "unsegment: {datum} split into several segments"),
            ReleaseOrder { earlier, later } => {
                write!(f, "release order: {later} transmitted before {earlier} completes")
            }
            PlanMismatch { datum } => write!(f, "plan of {datum} disagrees with the tasks"),
        }
    }
}

struct ResolvedTask {
    id: TaskId,
    begin: Millis,
    end: Millis,
    satellite: usize,
    station: usize,
}

/// Every violated constraint, sorted. Empty means feasible.
pub fn validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
    mode: SolveMode,
) -> Result<Vec<Violation>, StructuralError> {
    resolve(instance, schedule)?;
    let data = instance.data();
    let windows = instance.windows();
    let mut out = Vec::new();

    let mut resolved = Vec::with_capacity(schedule.tasks.len());
    let mut per_window: BTreeMap<usize, usize> = BTreeMap::new();
    // datum position -> [(window position, start, duration)]
    let mut segments: BTreeMap<usize, Vec<(usize, Millis, Millis)>> = BTreeMap::new();

    for task in &schedule.tasks {
        let w = instance.window_pos(task.window).expect("resolved");
        let tw = &windows[w];
        *per_window.entry(w).or_default() += 1;
        let sat = instance.window_satellite(w);
        let sum: Millis = task.d_set.iter().map(|e| e.1).sum();
        if task.duration != sum || task.end != task.begin + task.duration {
            out.push(Violation::TaskArithmetic { task: task.id });
        }
        if task.begin < tw.begin || task.end > tw.end {
            out.push(Violation::VisibleTime { task: task.id });
        }
        if task.duration < instance.window_d0(w) || task.duration > tw.len() {
            out.push(Violation::WorkTime { task: task.id });
        }
        let mut seen = BTreeSet::new();
        for (id, start, dur) in task.offsets() {
            let i = instance.datum_pos(id).expect("resolved");
            let d = &data[i];
            if !seen.insert(id) {
                out.push(Violation::RepeatedTransmission { datum: id });
            }
            if instance.datum_satellite(i) != sat {
                out.push(Violation::SatelliteMismatch { task: task.id, datum: id });
            }
            if task.begin < d.release || task.begin >= d.expiry() {
                out.push(Violation::LogicalTime { task: task.id, datum: id });
            }
            segments.entry(i).or_default().push((w, start, dur));
        }
        resolved.push(ResolvedTask {
            id: task.id,
            begin: task.begin,
            end: task.end,
            satellite: sat,
            station: instance.window_station(w),
        });
    }
    for (&w, &count) in &per_window {
        if count > 1 {
            out.push(Violation::SharedWindow { window: windows[w].id });
        }
    }

    check_resources(instance, &resolved, &mut out);
    check_transmissions(instance, schedule, mode, &segments, &mut out);
    if mode.fofd() {
        check_release_order(instance, schedule, &segments, &mut out);
    }

    out.sort();
    out.dedup();
    Ok(out)
}

fn resolve(instance: &Instance, schedule: &Schedule) -> Result<(), StructuralError> {
    let unknown_window = |w: WindowId| StructuralError(w.to_string());
    let unknown_datum = |d: DatumId| StructuralError(d.to_string());
    for task in &schedule.tasks {
        instance.window_pos(task.window).ok_or_else(|| unknown_window(task.window))?;
        for &(id, _) in &task.d_set {
            instance.datum_pos(id).ok_or_else(|| unknown_datum(id))?;
        }
    }
    for plan in &schedule.plans {
        instance.datum_pos(plan.datum).ok_or_else(|| unknown_datum(plan.datum))?;
        for &(w, _) in &plan.pieces {
            instance.window_pos(w).ok_or_else(|| unknown_window(w))?;
        }
    }
    for &id in &schedule.scheduled {
        instance.datum_pos(id).ok_or_else(|| unknown_datum(id))?;
    }
    Ok(())
}

/// Single antenna per station and per satellite, plus σ between adjacent
/// tasks of different satellites at one station.
fn check_resources(instance: &Instance, tasks: &[ResolvedTask], out: &mut Vec<Violation>) {
    let order = |a: &&ResolvedTask, b: &&ResolvedTask| (a.begin, a.end, a.id).cmp(&(b.begin, b.end, b.id));

    let mut by_station: BTreeMap<usize, Vec<&ResolvedTask>> = BTreeMap::new();
    let mut by_satellite: BTreeMap<usize, Vec<&ResolvedTask>> = BTreeMap::new();
    for t in tasks {
        by_station.entry(t.station).or_default().push(t);
        by_satellite.entry(t.satellite).or_default().push(t);
    }
    for list in by_station.values_mut() {
        list.sort_by(order);
        for (k, a) in list.iter().enumerate() {
            for b in &list[k + 1..] {
                if b.begin >= a.end {
                    break;
                }
                out.push(Violation::StationOverlap { first: a.id, second: b.id });
            }
        }
        for pair in list.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.satellite != b.satellite && b.begin - a.end < instance.sigma() {
                out.push(Violation::SetupTime { first: a.id, second: b.id });
            }
        }
    }
    for list in by_satellite.values_mut() {
        list.sort_by(order);
        for (k, a) in list.iter().enumerate() {
            for b in &list[k + 1..] {
                if b.begin >= a.end {
                    break;
                }
                // same-station pairs are already reported as station overlaps
                if a.station != b.station {
                    out.push(Violation::SatelliteOverlap { first: a.id, second: b.id });
                }
            }
        }
    }
}

fn check_transmissions(
    instance: &Instance,
    schedule: &Schedule,
    mode: SolveMode,
    segments: &BTreeMap<usize, Vec<(usize, Millis, Millis)>>,
    out: &mut Vec<Violation>,
) {
    let data = instance.data();
    let windows = instance.windows();
    let scheduled: BTreeSet<usize> =
        schedule.scheduled.iter().map(|&id| instance.datum_pos(id).expect("resolved")).collect();
    let mut plans: BTreeMap<usize, Vec<(usize, Millis)>> = BTreeMap::new();
    for plan in &schedule.plans {
        let i = instance.datum_pos(plan.datum).expect("resolved");
        let entry = plans.entry(i).or_default();
        if !entry.is_empty() {
            out.push(Violation::PlanMismatch { datum: plan.datum });
        }
        entry.extend(plan.pieces.iter().map(|&(w, d)| (instance.window_pos(w).expect("resolved"), d)));
    }

    for (&i, segs) in segments {
        let d = &data[i];
        if !scheduled.contains(&i) {
            out.push(Violation::PartialTransmission { datum: d.id });
            continue;
        }
        let sent: Millis = segs.iter().map(|s| s.2).sum();
        if sent > d.duration {
            out.push(Violation::RepeatedTransmission { datum: d.id });
        }
        let d0 = instance.datum_d0(i);
        for &(w, _, dur) in segs {
            if dur < d0 {
                out.push(Violation::SegmentTooShort { datum: d.id, window: windows[w].id, duration: dur });
            }
        }
        if !mode.segmented() && segs.len() > 1 {
            out.push(Violation::Segmented { datum: d.id });
        }
    }
    for &i in &scheduled {
        let d = &data[i];
        let sent: Millis = segments.get(&i).map(|s| s.iter().map(|s| s.2).sum()).unwrap_or_default();
        if sent < d.duration {
            out.push(Violation::IncompleteTransmission { datum: d.id, transmitted: sent });
        }
        let mut from_tasks: Vec<(usize, Millis)> =
            segments.get(&i).map(|s| s.iter().map(|&(w, _, dur)| (w, dur)).collect()).unwrap_or_default();
        let mut from_plan = plans.get(&i).cloned().unwrap_or_default();
        from_tasks.sort();
        from_plan.sort();
        if from_tasks != from_plan {
            out.push(Violation::PlanMismatch { datum: d.id });
        }
    }
    for &i in plans.keys() {
        if !scheduled.contains(&i) {
            out.push(Violation::PlanMismatch { datum: data[i].id });
        }
    }
}

/// Per satellite, every segment of a later-released datum starts no earlier
/// than the last segment of every earlier-released datum ends.
fn check_release_order(
    instance: &Instance,
    schedule: &Schedule,
    segments: &BTreeMap<usize, Vec<(usize, Millis, Millis)>>,
    out: &mut Vec<Violation>,
) {
    let data = instance.data();
    let mut by_satellite: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &id in &schedule.scheduled {
        let i = instance.datum_pos(id).expect("resolved");
        if segments.contains_key(&i) {
            by_satellite.entry(instance.datum_satellite(i)).or_default().push(i);
        }
    }
    for list in by_satellite.values_mut() {
        list.sort_by_key(|&i| instance.release_rank(i));
        // (latest end so far, datum holding it)
        let mut latest: Option<(Millis, usize)> = None;
        for &i in list.iter() {
            let segs = &segments[&i];
            let first_start = segs.iter().map(|s| s.1).min().expect("non-empty");
            let last_end = segs.iter().map(|s| s.1 + s.2).max().expect("non-empty");
            if let Some((end, j)) = latest {
                if first_start < end {
                    out.push(Violation::ReleaseOrder { earlier: data[j].id, later: data[i].id });
                }
            }
            if latest.is_none_or(|(end, _)| last_end > end) {
                latest = Some((last_end, i));
            }
        }
    }
}
