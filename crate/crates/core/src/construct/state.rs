use std::collections::BTreeSet;

use crate::model::{
    failure_rate_from, service_balance_from, DownlinkTask, Instance, Millis, ObjectivePoint, Schedule,
    SegmentationPlan, TaskId,
};

/// The single task occupying a window: a begin instant and the
/// `(datum position, duration)` items in release order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub begin: Millis,
    pub items: Vec<(usize, Millis)>,
}

impl Slot {
    pub fn duration(&self) -> Millis {
        self.items.iter().map(|e| e.1).sum()
    }

    pub fn end(&self) -> Millis {
        self.begin + self.duration()
    }

    /// `(datum, start, duration)` for each item.
    pub fn segments(&self) -> impl Iterator<Item = (usize, Millis, Millis)> + '_ {
        let mut at = self.begin;
        self.items.iter().map(move |&(i, d)| {
            let start = at;
            at += d;
            (i, start, d)
        })
    }
}

/// Positional working form of a solution: at most one slot per window and
/// the segmentation plan of every scheduled datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowState {
    slots: Vec<Option<Slot>>,
    plans: Vec<Option<Vec<(usize, Millis)>>>,
    n_scheduled: usize,
}

impl WindowState {
    pub fn new(instance: &Instance) -> Self {
        WindowState {
            slots: vec![None; instance.windows().len()],
            plans: vec![None; instance.data().len()],
            n_scheduled: 0,
        }
    }

    pub fn slot(&self, w: usize) -> Option<&Slot> {
        self.slots[w].as_ref()
    }

    pub fn slots(&self) -> impl Iterator<Item = (usize, &Slot)> {
        self.slots.iter().enumerate().filter_map(|(w, s)| s.as_ref().map(|s| (w, s)))
    }

    /// Pieces of datum `i` by window position, if scheduled.
    pub fn plan(&self, i: usize) -> Option<&[(usize, Millis)]> {
        self.plans[i].as_deref()
    }

    pub fn is_scheduled(&self, i: usize) -> bool {
        self.plans[i].is_some()
    }

    pub fn n_scheduled(&self) -> usize {
        self.n_scheduled
    }

    pub fn scheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.plans.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(i, _)| i)
    }

    pub fn unscheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.plans.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(i, _)| i)
    }

    pub fn load(&self, w: usize) -> Millis {
        self.slots[w].as_ref().map(Slot::duration).unwrap_or_default()
    }

    pub(crate) fn set_slot(&mut self, w: usize, slot: Option<Slot>) {
        self.slots[w] = slot.filter(|s| !s.items.is_empty());
    }

    pub(crate) fn set_plan(&mut self, i: usize, plan: Option<Vec<(usize, Millis)>>) {
        match (&self.plans[i], &plan) {
            (None, Some(_)) => self.n_scheduled += 1,
            (Some(_), None) => self.n_scheduled -= 1,
            _ => {}
        }
        self.plans[i] = plan;
    }

    pub fn objectives(&self, instance: &Instance) -> ObjectivePoint<f64> {
        ObjectivePoint {
            f1: failure_rate_from(instance, self.scheduled()),
            f2: service_balance_from(instance, |w| self.load(w)),
        }
    }

    /// Canonical id form: tasks in window order numbered from zero, plans in
    /// datum order with pieces in window order.
    pub fn to_schedule(&self, instance: &Instance) -> Schedule {
        let windows = instance.windows();
        let data = instance.data();
        let tasks = self
            .slots()
            .enumerate()
            .map(|(k, (w, slot))| DownlinkTask {
                id: TaskId(k as u32),
                begin: slot.begin,
                end: slot.end(),
                duration: slot.duration(),
                window: windows[w].id,
                d_set: slot.items.iter().map(|&(i, d)| (data[i].id, d)).collect(),
            })
            .collect();
        let plans = self
            .plans
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                p.as_ref().map(|p| SegmentationPlan {
                    datum: data[i].id,
                    pieces: p.iter().map(|&(w, d)| (windows[w].id, d)).collect(),
                })
            })
            .collect();
        let scheduled: BTreeSet<_> = self.scheduled().map(|i| data[i].id).collect();
        Schedule { tasks, plans, scheduled }
    }
}
