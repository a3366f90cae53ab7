//! Exhaustive ground truth for tiny instances.
//!
//! Every datum is either dropped or cut into grid-sized pieces over a set of
//! its admissible windows. Each used window then carries one task holding its
//! pieces in release order. Placement is decided exactly on the millisecond
//! grid: for every temporal order of the tasks the earliest begins solve a
//! system of difference constraints.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::OracleError;
use crate::model::{
    failure_rate_from, service_balance_from, DatumId, DownlinkTask, Instance, Millis, ObjectivePoint, Schedule,
    SegmentationPlan, SolveMode, TaskId,
};

pub const MAX_DATA: usize = 6;
pub const MAX_WINDOWS: usize = 4;

/// Pieces `(window position, duration)` per datum; empty means dropped.
type Assignment = Vec<Vec<(usize, Millis)>>;

/// The nondominated front of `instance` under `mode`, sorted by `f1`.
pub fn exact_front(
    instance: &Instance,
    mode: SolveMode,
    grid: Millis,
) -> Result<Vec<ObjectivePoint<f64>>, OracleError> {
    Ok(exact_solutions(instance, mode, grid)?.into_iter().map(|s| s.0).collect())
}

/// Like [`exact_front`], with one witness schedule per point.
pub fn exact_solutions(
    instance: &Instance,
    mode: SolveMode,
    grid: Millis,
) -> Result<Vec<(ObjectivePoint<f64>, Schedule)>, OracleError> {
    if instance.data().len() > MAX_DATA || instance.windows().len() > MAX_WINDOWS {
        return Err(OracleError::TooLarge { max_data: MAX_DATA, max_windows: MAX_WINDOWS });
    }
    if !grid.is_positive() {
        return Err(OracleError::BadGrid);
    }
    let options: Vec<Vec<Vec<(usize, Millis)>>> =
        (0..instance.data().len()).map(|i| datum_options(instance, mode, i, grid)).collect();

    let search = Search { instance, mode, options: &options };
    let fronts: Vec<Front> = if options.is_empty() {
        let mut front = Front::default();
        search.dfs(0, &mut Vec::new(), &mut vec![Millis::ZERO; instance.windows().len()], &mut front);
        vec![front]
    } else {
        options[0]
            .par_iter()
            .map(|first| {
                let mut front = Front::default();
                let mut loads = vec![Millis::ZERO; instance.windows().len()];
                if search.push(first, &mut loads) {
                    search.dfs(1, &mut vec![first.clone()], &mut loads, &mut front);
                }
                front
            })
            .collect()
    };
    let mut merged = Front::default();
    for front in fronts {
        for (p, a) in front.0 {
            merged.offer(p, a);
        }
    }
    let mut out: Vec<_> = merged.0.into_iter().map(|(p, a)| (p, to_schedule(instance, mode, &a))).collect();
    out.sort_by(|a, b| a.0.f1.total_cmp(&b.0.f1).then(a.0.f2.total_cmp(&b.0.f2)));
    Ok(out)
}

/// All ways to send datum `i`, including not at all.
fn datum_options(instance: &Instance, mode: SolveMode, i: usize, grid: Millis) -> Vec<Vec<(usize, Millis)>> {
    let duration = instance.data()[i].duration;
    let d0 = instance.datum_d0(i);
    let windows = instance.admissible_windows(i);
    let len = |w: usize| instance.windows()[w].len();
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    if !mode.segmented() {
        for &w in windows {
            if duration <= len(w) {
                out.insert(vec![(w, duration)]);
            }
        }
        return out.into_iter().collect();
    }
    for mask in 1u32..(1 << windows.len()) {
        let chosen: Vec<usize> = (0..windows.len()).filter(|k| mask & (1 << k) != 0).map(|k| windows[k]).collect();
        // any chosen window may take the off-grid remainder
        for rest in 0..chosen.len() {
            let others: Vec<usize> = chosen.iter().enumerate().filter(|&(k, _)| k != rest).map(|(_, &w)| w).collect();
            let mut pieces = Vec::new();
            grid_pieces(&others, 0, duration, d0, grid, &len, &mut pieces, &mut |pieces, left| {
                if left >= d0 && left <= len(chosen[rest]) {
                    let mut plan = pieces.to_vec();
                    plan.push((chosen[rest], left));
                    plan.sort();
                    out.insert(plan);
                }
            });
        }
    }
    out.into_iter().collect()
}

type Emit<'a> = dyn FnMut(&[(usize, Millis)], Millis) + 'a;

#[allow(clippy::too_many_arguments)]
fn grid_pieces(
    windows: &[usize],
    k: usize,
    left: Millis,
    d0: Millis,
    grid: Millis,
    len: &dyn Fn(usize) -> Millis,
    pieces: &mut Vec<(usize, Millis)>,
    emit: &mut Emit<'_>,
) {
    if k == windows.len() {
        emit(pieces, left);
        return;
    }
    let w = windows[k];
    let mut units = (d0.ms() + grid.ms() - 1) / grid.ms();
    loop {
        let piece = Millis::from_ms(units * grid.ms());
        // keep at least d0 for the remainder
        if piece > len(w) || piece + d0 > left {
            break;
        }
        pieces.push((w, piece));
        grid_pieces(windows, k + 1, left - piece, d0, grid, len, pieces, emit);
        pieces.pop();
        units += 1;
    }
}

#[derive(Default)]
struct Front(Vec<(ObjectivePoint<f64>, Assignment)>);

impl Front {
    fn covered(&self, p: &ObjectivePoint<f64>) -> bool {
        self.0.iter().any(|(q, _)| q.covers(p))
    }

    fn offer(&mut self, p: ObjectivePoint<f64>, a: Assignment) {
        if self.covered(&p) {
            return;
        }
        self.0.retain(|(q, _)| !p.dominates(q));
        self.0.push((p, a));
    }
}

struct Search<'a> {
    instance: &'a Instance,
    mode: SolveMode,
    options: &'a [Vec<Vec<(usize, Millis)>>],
}

impl Search<'_> {
    fn push(&self, plan: &[(usize, Millis)], loads: &mut [Millis]) -> bool {
        for &(w, d) in plan {
            loads[w] += d;
        }
        if plan.iter().all(|&(w, _)| loads[w] <= self.instance.windows()[w].len()) {
            true
        } else {
            self.pop(plan, loads);
            false
        }
    }

    fn pop(&self, plan: &[(usize, Millis)], loads: &mut [Millis]) {
        for &(w, d) in plan {
            loads[w] -= d;
        }
    }

    fn dfs(&self, i: usize, chosen: &mut Assignment, loads: &mut Vec<Millis>, front: &mut Front) {
        if i == self.options.len() {
            let scheduled = (0..chosen.len()).filter(|&k| !chosen[k].is_empty());
            let point =
                ObjectivePoint::new(failure_rate_from(self.instance, scheduled), service_balance_from(self.instance, |w| loads[w]));
            if !front.covered(&point) && feasible(self.instance, self.mode, chosen) {
                front.offer(point, chosen.clone());
            }
            return;
        }
        for plan in &self.options[i] {
            if self.push(plan, loads) {
                chosen.push(plan.clone());
                self.dfs(i + 1, chosen, loads, front);
                chosen.pop();
                self.pop(plan, loads);
            }
        }
    }
}

struct Task {
    window: usize,
    /// `(datum, duration)` in release order.
    items: Vec<(usize, Millis)>,
    duration: Millis,
    lo: Millis,
    hi: Millis,
}

/// One task per used window. Within a task the order of items only matters
/// under release-order constraints, and there release order is the only
/// order that can hold, so items are always kept in release order.
fn tasks(instance: &Instance, chosen: &Assignment) -> Vec<Task> {
    let mut per_window: Vec<Vec<(usize, Millis)>> = vec![Vec::new(); instance.windows().len()];
    for (i, plan) in chosen.iter().enumerate() {
        for &(w, d) in plan {
            per_window[w].push((i, d));
        }
    }
    let data = instance.data();
    per_window
        .into_iter()
        .enumerate()
        .filter(|(_, items)| !items.is_empty())
        .map(|(w, mut items)| {
            items.sort_by_key(|&(i, _)| instance.release_rank(i));
            let tw = &instance.windows()[w];
            let duration: Millis = items.iter().map(|e| e.1).sum();
            let release = items.iter().map(|&(i, _)| data[i].release).max().expect("non-empty");
            let expiry = items.iter().map(|&(i, _)| data[i].expiry()).min().expect("non-empty");
            Task {
                window: w,
                items,
                duration,
                lo: tw.begin.max(release),
                hi: (tw.end - duration).min(expiry - Millis::from_ms(1)),
            }
        })
        .collect()
}

/// `begin[to] >= begin[from] + gap`
type Edge = (usize, usize, Millis);

fn feasible(instance: &Instance, mode: SolveMode, chosen: &Assignment) -> bool {
    placement(instance, mode, &tasks(instance, chosen)).is_some()
}

/// Earliest begins of `tasks` if any placement satisfies every constraint.
fn placement(instance: &Instance, mode: SolveMode, tasks: &[Task]) -> Option<Vec<Millis>> {
    if tasks.iter().any(|t| t.lo > t.hi) {
        return None;
    }
    let n = tasks.len();
    let mut fixed: Vec<Edge> = Vec::new();
    // resource pairs: (a, b, gap needed when a precedes b)
    let mut shared: Vec<(usize, usize, Millis)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (wa, wb) = (tasks[a].window, tasks[b].window);
            let same_sat = instance.window_satellite(wa) == instance.window_satellite(wb);
            let same_station = instance.window_station(wa) == instance.window_station(wb);
            if same_station || same_sat {
                let gap = if same_station && !same_sat { instance.sigma() } else { Millis::ZERO };
                shared.push((a, b, gap));
            }
            if mode.fofd() && same_sat {
                release_edges(instance, tasks, a, b, &mut fixed);
                release_edges(instance, tasks, b, a, &mut fixed);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let mut pos = vec![0; n];
        for (k, &t) in order.iter().enumerate() {
            pos[t] = k;
        }
        let mut edges = fixed.clone();
        for &(a, b, gap) in &shared {
            let (first, second) = if pos[a] < pos[b] { (a, b) } else { (b, a) };
            edges.push((first, second, tasks[first].duration + gap));
        }
        if let Some(begins) = solve(tasks, &edges) {
            return Some(begins);
        }
        if !next_permutation(&mut order) {
            return None;
        }
    }
}

/// Segments in `to` of data released after data with segments in `from` must
/// start at or after those end.
fn release_edges(instance: &Instance, tasks: &[Task], from: usize, to: usize, edges: &mut Vec<Edge>) {
    let mut off_from = Millis::ZERO;
    for &(x, dx) in &tasks[from].items {
        let mut off_to = Millis::ZERO;
        for &(y, dy) in &tasks[to].items {
            if x != y && instance.release_rank(x) < instance.release_rank(y) {
                edges.push((from, to, off_from + dx - off_to));
            }
            off_to += dy;
        }
        off_from += dx;
    }
}

/// Least solution of the difference constraints above the lower bounds.
fn solve(tasks: &[Task], edges: &[Edge]) -> Option<Vec<Millis>> {
    let mut begin: Vec<Millis> = tasks.iter().map(|t| t.lo).collect();
    for _ in 0..=tasks.len() {
        let mut changed = false;
        for &(from, to, gap) in edges {
            let need = begin[from] + gap;
            if need > begin[to] {
                if need > tasks[to].hi {
                    return None;
                }
                begin[to] = need;
                changed = true;
            }
        }
        if !changed {
            return Some(begin);
        }
    }
    None
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn to_schedule(instance: &Instance, mode: SolveMode, chosen: &Assignment) -> Schedule {
    let tasks = tasks(instance, chosen);
    let begins = placement(instance, mode, &tasks).expect("front members are feasible");
    let id = |i: usize| instance.data()[i].id;
    let window_id = |w: usize| instance.windows()[w].id;
    Schedule {
        tasks: tasks
            .iter()
            .zip(&begins)
            .enumerate()
            .map(|(k, (t, &begin))| DownlinkTask {
                id: TaskId(k as u32),
                begin,
                end: begin + t.duration,
                duration: t.duration,
                window: window_id(t.window),
                d_set: t.items.iter().map(|&(i, d)| (id(i), d)).collect(),
            })
            .collect(),
        plans: chosen
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| SegmentationPlan { datum: id(i), pieces: p.iter().map(|&(w, d)| (window_id(w), d)).collect() })
            .collect(),
        scheduled: chosen
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, _)| id(i))
            .collect::<BTreeSet<DatumId>>(),
    }
}
