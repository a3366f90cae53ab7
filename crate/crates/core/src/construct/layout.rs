//! Placement of one task against every other task held in the state.

use super::state::WindowState;
use crate::model::{Instance, Millis, SolveMode};

/// Inserts `(i, len)` keeping release order.
pub(crate) fn with_item(instance: &Instance, items: &[(usize, Millis)], i: usize, len: Millis) -> Vec<(usize, Millis)> {
    let rank = instance.release_rank(i);
    let at = items.partition_point(|&(j, _)| instance.release_rank(j) < rank);
    let mut out = Vec::with_capacity(items.len() + 1);
    out.extend_from_slice(&items[..at]);
    out.push((i, len));
    out.extend_from_slice(&items[at..]);
    out
}

/// Earliest feasible begin for a task holding `items` (release order) in
/// window `w`, with every other window's slot held fixed. The current slot of
/// `w` is ignored.
pub fn earliest_begin(
    instance: &Instance,
    state: &WindowState,
    mode: SolveMode,
    w: usize,
    items: &[(usize, Millis)],
) -> Option<Millis> {
    let tw = &instance.windows()[w];
    let data = instance.data();
    let dur: Millis = items.iter().map(|e| e.1).sum();
    if dur > tw.len() {
        return None;
    }
    let mut lo = tw.begin;
    let mut hi = tw.end - dur;
    for &(i, _) in items {
        lo = lo.max(data[i].release);
        hi = hi.min(data[i].expiry() - Millis(1));
    }
    let sat = instance.window_satellite(w);
    let station = instance.window_station(w);

    if mode.fofd() {
        let mut off = Millis::ZERO;
        for &(i, len) in items {
            let rank = instance.release_rank(i);
            for &o in instance.satellite_windows(sat) {
                if o == w {
                    continue;
                }
                let Some(slot) = state.slot(o) else { continue };
                for (j, start, jl) in slot.segments() {
                    if j == i {
                        continue;
                    }
                    if instance.release_rank(j) < rank {
                        lo = lo.max(start + jl - off);
                    } else {
                        hi = hi.min(start - off - len);
                    }
                }
            }
            off += len;
        }
    }
    if lo > hi {
        return None;
    }

    // begin values inside any of these open intervals collide with a task
    let mut forbidden: Vec<(Millis, Millis)> = Vec::new();
    for &o in instance.station_windows(station) {
        if o == w {
            continue;
        }
        if let Some(slot) = state.slot(o) {
            let gap = if instance.window_satellite(o) != sat { instance.sigma() } else { Millis::ZERO };
            forbidden.push((slot.begin - gap - dur, slot.end() + gap));
        }
    }
    for &o in instance.satellite_windows(sat) {
        if o == w || instance.window_station(o) == station {
            continue;
        }
        if let Some(slot) = state.slot(o) {
            forbidden.push((slot.begin - dur, slot.end()));
        }
    }
    forbidden.sort_unstable();
    let mut begin = lo;
    for (l, r) in forbidden {
        if l >= begin {
            break;
        }
        if begin < r {
            begin = r;
        }
    }
    (begin <= hi).then_some(begin)
}

/// Largest piece of datum `i`, at most `max_piece`, that window `w` can
/// still take; zero when not even a d0 piece fits. Found by bisection on the
/// millisecond grid.
pub fn capacity(
    instance: &Instance,
    state: &WindowState,
    mode: SolveMode,
    w: usize,
    i: usize,
    max_piece: Millis,
) -> Millis {
    let base = state.slot(w).map(|s| s.items.as_slice()).unwrap_or(&[]);
    let used: Millis = base.iter().map(|e| e.1).sum();
    let fits = |len: Millis| earliest_begin(instance, state, mode, w, &with_item(instance, base, i, len)).is_some();
    let d0 = instance.datum_d0(i);
    let max = max_piece.min(instance.windows()[w].len() - used);
    if max < d0 || !fits(d0) {
        return Millis::ZERO;
    }
    if fits(max) {
        return max;
    }
    let (mut lo, mut hi) = (d0, max);
    while hi - lo > Millis(1) {
        let mid = Millis(lo.ms() + (hi - lo).ms() / 2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
