//! Hybrid chromosome: a selection bit per datum, split fractions per
//! (datum, window) pair and a begin gene per window.
//!
//! All genes refer to positions in the owning [`Instance`]. Fractions are
//! mapped to whole milliseconds on decode; the last piece of each datum takes
//! the remainder so that pieces always sum to the full duration.

use std::collections::BTreeSet;

use crate::error::{EncodingError, StructuralError};
use crate::model::{
    validate_schedule, DownlinkTask, Instance, Millis, Schedule, SegmentationPlan, SolveMode, TaskId,
    TransmissionWindow, Violation,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub x: Vec<bool>,
    /// Per datum, `(window position, fraction)` pairs sorted by window.
    pub y: Vec<Vec<(usize, f64)>>,
    pub z: Vec<f64>,
}

impl Chromosome {
    /// All-zero chromosome: nothing scheduled, every window starts at its begin.
    pub fn empty(instance: &Instance) -> Self {
        Chromosome {
            x: vec![false; instance.data().len()],
            y: vec![Vec::new(); instance.data().len()],
            z: vec![0.0; instance.windows().len()],
        }
    }

    /// Checks shape, gene ranges and that y only references windows of the
    /// datum's satellite.
    pub fn check(&self, instance: &Instance) -> Result<(), EncodingError> {
        let n = instance.data().len();
        let m = instance.windows().len();
        if self.x.len() != n || self.y.len() != n || self.z.len() != m {
            return Err(StructuralError("chromosome length".into()).into());
        }
        for &z in &self.z {
            if !(0.0..=1.0).contains(&z) {
                return Err(EncodingError::GeneOutOfRange(z));
            }
        }
        for (i, genes) in self.y.iter().enumerate() {
            for &(w, f) in genes {
                if w >= m || instance.window_satellite(w) != instance.datum_satellite(i) {
                    return Err(StructuralError(format!("y gene of {}", instance.data()[i].id)).into());
                }
                if !(0.0..=1.0).contains(&f) {
                    return Err(EncodingError::GeneOutOfRange(f));
                }
            }
        }
        Ok(())
    }
}

/// Task begin for a begin gene, with the offset clamped so the task ends
/// inside the window.
pub fn begin_from_gene(z: f64, window: &TransmissionWindow, task_duration: Millis) -> Result<Millis, EncodingError> {
    let len = window.len();
    if task_duration > len {
        return Err(EncodingError::TaskTooLong { task: task_duration, window: len });
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(EncodingError::GeneOutOfRange(z));
    }
    let offset = ((z * len.ms() as f64).round() as i64).min((len - task_duration).ms());
    Ok(window.begin + Millis(offset))
}

/// Millisecond pieces of datum `i`, remainder on the last one.
fn pieces(instance: &Instance, i: usize, genes: &[(usize, f64)]) -> Vec<(usize, Millis)> {
    let total = instance.data()[i].duration;
    let mut out: Vec<(usize, Millis)> = genes
        .iter()
        .filter(|g| g.1 > 0.0)
        .map(|&(w, f)| (w, Millis((f * total.ms() as f64).round() as i64)))
        .collect();
    if let Some(k) = out.len().checked_sub(1) {
        let head: Millis = out[..k].iter().map(|p| p.1).sum();
        out[k].1 = total - head;
    }
    out
}

/// Builds the schedule a chromosome describes and reports its violations.
/// Nothing is repaired.
pub fn decode(
    chromosome: &Chromosome,
    instance: &Instance,
    mode: SolveMode,
) -> Result<(Schedule, Vec<Violation>), EncodingError> {
    chromosome.check(instance)?;
    let windows = instance.windows();
    let data = instance.data();
    let mut per_window: Vec<Vec<(usize, Millis)>> = vec![Vec::new(); windows.len()];
    let mut schedule = Schedule::default();
    for (i, &selected) in chromosome.x.iter().enumerate() {
        if !selected {
            continue;
        }
        let cut = pieces(instance, i, &chromosome.y[i]);
        for &(w, d) in &cut {
            per_window[w].push((i, d));
        }
        schedule.scheduled.insert(data[i].id);
        schedule.plans.push(SegmentationPlan {
            datum: data[i].id,
            pieces: cut.iter().map(|&(w, d)| (windows[w].id, d)).collect(),
        });
    }
    for (w, items) in per_window.iter_mut().enumerate() {
        if items.is_empty() {
            continue;
        }
        items.sort_by_key(|&(i, _)| (data[i].release, data[i].id));
        let duration: Millis = items.iter().map(|e| e.1).sum();
        // an over-long task is left at the window begin for the validator to flag
        let begin = begin_from_gene(chromosome.z[w], &windows[w], duration).unwrap_or(windows[w].begin);
        schedule.tasks.push(DownlinkTask {
            id: TaskId(schedule.tasks.len() as u32),
            begin,
            end: begin + duration,
            duration,
            window: windows[w].id,
            d_set: items.iter().map(|&(i, d)| (data[i].id, d)).collect(),
        });
    }
    let violations = validate_schedule(instance, &schedule, mode)?;
    Ok((schedule, violations))
}

/// Inverse of [`decode`] for feasible schedules.
pub fn encode(schedule: &Schedule, instance: &Instance, mode: SolveMode) -> Result<Chromosome, EncodingError> {
    let violations = validate_schedule(instance, schedule, mode)?;
    if !violations.is_empty() {
        return Err(EncodingError::Infeasible(violations.len()));
    }
    let mut c = Chromosome::empty(instance);
    let scheduled: BTreeSet<usize> = schedule.scheduled.iter().map(|&id| instance.datum_pos(id).expect("valid")).collect();
    for &i in &scheduled {
        c.x[i] = true;
    }
    for task in &schedule.tasks {
        let w = instance.window_pos(task.window).expect("valid");
        let tw = &instance.windows()[w];
        c.z[w] = (task.begin - tw.begin).ms() as f64 / tw.len().ms() as f64;
        for &(id, d) in &task.d_set {
            let i = instance.datum_pos(id).expect("valid");
            c.y[i].push((w, d.ms() as f64 / instance.data()[i].duration.ms() as f64));
        }
    }
    for genes in &mut c.y {
        genes.sort_by_key(|g| g.0);
    }
    Ok(c)
}
