use crate::construct::Slot;
use crate::model::Instance;

/// `1 / exp(1 − x_index / max x)`; 1 for every index of an all-zero list.
pub fn nod(values: &[f64], index: usize) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return 1.0;
    }
    (values[index] / max - 1.0).exp()
}

/// 0 for disjoint admissible window sets, 1 when the union of the shared
/// windows is shorter than both durations together, 0.5 otherwise.
pub fn conflict_distance(instance: &Instance, a: usize, b: usize) -> f64 {
    let wa = instance.admissible_windows(a);
    let wb = instance.admissible_windows(b);
    if !wa.iter().any(|w| wb.contains(w)) {
        return 0.0;
    }
    let windows = instance.windows();
    let union: i64 = wa.iter().chain(wb.iter().filter(|w| !wa.contains(w))).map(|&w| windows[w].len().ms()).sum();
    let data = instance.data();
    if union < (data[a].duration + data[b].duration).ms() {
        1.0
    } else {
        0.5
    }
}

/// Congestion of datum `i`: the sum over `j ≠ i` of `nod` on the
/// priority-weighted conflict distances.
pub fn congestion(instance: &Instance, i: usize) -> f64 {
    let weighted: Vec<f64> = (0..instance.data().len())
        .filter(|&j| j != i)
        .map(|j| instance.data()[j].priority as f64 * conflict_distance(instance, i, j))
        .collect();
    (0..weighted.len()).map(|k| nod(&weighted, k)).sum()
}

/// Task-level guidance kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskGuidance {
    /// Sum of priorities carried.
    Priority,
    /// Sum of congestion values carried.
    Congestion,
}

/// Per-instance guidance values, computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct Guidance {
    congestion: Vec<f64>,
}

impl Guidance {
    pub fn new(instance: &Instance) -> Self {
        Guidance { congestion: (0..instance.data().len()).map(|i| congestion(instance, i)).collect() }
    }

    pub fn congestion(&self, i: usize) -> f64 {
        self.congestion[i]
    }

    pub fn task(&self, kind: TaskGuidance, slot: &Slot, instance: &Instance) -> f64 {
        slot.items
            .iter()
            .map(|&(i, _)| match kind {
                TaskGuidance::Priority => instance.data()[i].priority as f64,
                TaskGuidance::Congestion => self.congestion[i],
            })
            .sum()
    }
}
