use std::cmp::Reverse;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::guidance::{Guidance, TaskGuidance};
use super::{DestroyOp, TabooBank, TabooPolicy};
use crate::construct::{earliest_begin, Slot, WindowState};
use crate::model::{Instance, SolveMode};

/// Removes data in the order of `op` until the bank holds
/// `⌈TR · scheduled⌉` originals. Tasks that lose data are re-packed at their
/// earliest begin.
pub fn destroy<R: Rng + ?Sized>(
    instance: &Instance,
    guidance: &Guidance,
    state: &mut WindowState,
    mode: SolveMode,
    op: DestroyOp,
    policy: TabooPolicy,
    rng: &mut R,
) -> TabooBank {
    let n = state.n_scheduled();
    if n == 0 {
        return TabooBank::default();
    }
    let tr = policy.draw(rng).clamp(0.0, 1.0);
    let capacity = ((tr * n as f64).ceil() as usize).min(n);
    let mut bank = TabooBank { members: BTreeSet::new(), capacity };
    if capacity == 0 {
        return bank;
    }
    for i in removal_order(instance, guidance, state, op, rng) {
        if bank.len() == capacity {
            break;
        }
        bank.members.insert(i);
    }
    remove_data(instance, state, mode, &bank.members);
    bank
}

fn removal_order<R: Rng + ?Sized>(
    instance: &Instance,
    guidance: &Guidance,
    state: &WindowState,
    op: DestroyOp,
    rng: &mut R,
) -> Vec<usize> {
    let data = instance.data();
    let windows = instance.windows();
    let mut scheduled: Vec<usize> = state.scheduled().collect();
    scheduled.sort_by_key(|&i| data[i].id);
    match op {
        DestroyOp::Rd => scheduled.shuffle(rng),
        DestroyOp::Pd => scheduled.sort_by_key(|&i| (data[i].priority, data[i].id)),
        DestroyOp::Dd => scheduled.sort_by_key(|&i| (Reverse(data[i].duration), data[i].id)),
        DestroyOp::Cd => scheduled.sort_by(|&a, &b| {
            guidance.congestion(a).total_cmp(&guidance.congestion(b)).then(data[a].id.cmp(&data[b].id))
        }),
        DestroyOp::Rt | DestroyOp::Pt | DestroyOp::Wt | DestroyOp::Ct => {
            let mut tasks: Vec<(usize, &Slot)> = state.slots().collect();
            tasks.sort_by_key(|&(w, _)| windows[w].id);
            match op {
                DestroyOp::Rt => tasks.shuffle(rng),
                DestroyOp::Pt => tasks.sort_by(|a, b| {
                    let ga = guidance.task(TaskGuidance::Priority, a.1, instance);
                    let gb = guidance.task(TaskGuidance::Priority, b.1, instance);
                    gb.total_cmp(&ga)
                }),
                DestroyOp::Wt => tasks.sort_by_key(|&(_, s)| Reverse(s.duration())),
                _ => tasks.sort_by(|a, b| {
                    let ga = guidance.task(TaskGuidance::Congestion, a.1, instance);
                    let gb = guidance.task(TaskGuidance::Congestion, b.1, instance);
                    ga.total_cmp(&gb)
                }),
            }
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for (_, slot) in tasks {
                let mut items = slot.items.clone();
                match op {
                    DestroyOp::Rt => items.shuffle(rng),
                    DestroyOp::Pt => items.sort_by_key(|&(i, _)| (Reverse(data[i].priority), data[i].id)),
                    DestroyOp::Wt => items.sort_by_key(|&(i, d)| (Reverse(d), data[i].id)),
                    _ => {}
                }
                out.extend(items.into_iter().map(|e| e.0).filter(|&i| seen.insert(i)));
            }
            return out;
        }
    }
    scheduled
}

/// Unschedules `victims` whole and re-packs the tasks they leave. Under
/// release ordering a shortened task may have no feasible begin left; its
/// remaining data are then unscheduled too and returned.
pub fn remove_data(instance: &Instance, state: &mut WindowState, mode: SolveMode, victims: &BTreeSet<usize>) -> Vec<usize> {
    let mut affected = BTreeSet::new();
    for &i in victims {
        unschedule(state, i, &mut affected);
    }
    let mut cascaded = Vec::new();
    while !affected.is_empty() {
        let w = *affected
            .iter()
            .min_by_key(|&&w| (state.slot(w).map(|s| s.begin), w))
            .expect("non-empty");
        affected.remove(&w);
        let Some(slot) = state.slot(w) else { continue };
        let items = slot.items.clone();
        match earliest_begin(instance, state, mode, w, &items) {
            Some(begin) => state.set_slot(w, Some(Slot { begin, items })),
            None => {
                for (i, _) in items {
                    if state.is_scheduled(i) {
                        unschedule(state, i, &mut affected);
                        cascaded.push(i);
                    }
                }
            }
        }
    }
    cascaded
}

fn unschedule(state: &mut WindowState, i: usize, affected: &mut BTreeSet<usize>) {
    let Some(plan) = state.plan(i).map(<[_]>::to_vec) else { return };
    for (w, _) in plan {
        if let Some(slot) = state.slot(w) {
            let items: Vec<_> = slot.items.iter().copied().filter(|e| e.0 != i).collect();
            let begin = slot.begin;
            state.set_slot(w, Some(Slot { begin, items }));
        }
        affected.insert(w);
    }
    state.set_plan(i, None);
}
