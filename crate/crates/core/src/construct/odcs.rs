use rand::seq::SliceRandom;
use rand::Rng;

use super::layout::capacity;
use super::state::WindowState;
use crate::model::{Instance, Millis, SolveMode};

/// Order in which candidate windows are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowRule {
    /// Largest remaining capacity first, ties by earliest begin.
    LargestCapacity,
    /// Shortest window first, ties by earliest begin. Favours utilisation.
    ShortestWindow,
    /// Uniformly shuffled.
    Random,
}

impl WindowRule {
    pub const ALL: [WindowRule; 3] = [WindowRule::LargestCapacity, WindowRule::ShortestWindow, WindowRule::Random];

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.random_range(0..Self::ALL.len())]
    }
}

/// Cuts datum `i` into pieces over its admissible windows, skipping
/// `excluded`. Returns `(window, duration)` pieces, or `None` when the
/// windows cannot hold the datum.
pub fn odcs<R: Rng + ?Sized>(
    instance: &Instance,
    state: &WindowState,
    mode: SolveMode,
    i: usize,
    rule: WindowRule,
    excluded: &[usize],
    rng: &mut R,
) -> Option<Vec<(usize, Millis)>> {
    let duration = instance.data()[i].duration;
    let d0 = instance.datum_d0(i);
    let need = if mode.segmented() { d0 } else { duration };
    let mut candidates: Vec<(usize, Millis)> = instance
        .admissible_windows(i)
        .iter()
        .filter(|w| !excluded.contains(w))
        .map(|&w| (w, capacity(instance, state, mode, w, i, duration)))
        .filter(|&(_, cap)| cap >= need)
        .collect();
    let total: Millis = candidates.iter().map(|c| c.1).sum();
    if total < duration {
        return None;
    }
    let windows = instance.windows();
    match rule {
        WindowRule::LargestCapacity => {
            candidates.sort_by_key(|&(w, cap)| (std::cmp::Reverse(cap), windows[w].begin, w))
        }
        WindowRule::ShortestWindow => candidates.sort_by_key(|&(w, _)| (windows[w].len(), windows[w].begin, w)),
        WindowRule::Random => candidates.shuffle(rng),
    }
    if !mode.segmented() {
        return Some(vec![(candidates[0].0, duration)]);
    }

    let mut pieces = Vec::new();
    let mut rest = duration;
    for (w, cap) in candidates {
        if rest == Millis::ZERO {
            break;
        }
        let mut take = cap.min(rest);
        // fold the residue so the final piece still meets d0
        if rest > take && rest - take < d0 {
            take = rest - d0;
        }
        if take < d0 {
            continue;
        }
        pieces.push((w, take));
        rest -= take;
    }
    if rest > Millis::ZERO {
        return None;
    }
    pieces.sort_unstable();
    Some(pieces)
}
