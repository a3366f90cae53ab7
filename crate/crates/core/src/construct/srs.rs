use super::layout::{earliest_begin, with_item};
use super::state::{Slot, WindowState};
use crate::model::{Instance, Millis, SolveMode};

/// Places the pieces of datum `i` one window at a time, each task packed at
/// its earliest feasible begin. Either every piece lands and the plan is
/// recorded, or the state is restored and the first failing window returned.
pub fn srs(
    instance: &Instance,
    state: &mut WindowState,
    mode: SolveMode,
    i: usize,
    pieces: &[(usize, Millis)],
) -> Result<(), usize> {
    let mut saved: Vec<(usize, Option<Slot>)> = Vec::with_capacity(pieces.len());
    for &(w, len) in pieces {
        let base = state.slot(w).map(|s| s.items.as_slice()).unwrap_or(&[]);
        let items = with_item(instance, base, i, len);
        match earliest_begin(instance, state, mode, w, &items) {
            Some(begin) => {
                saved.push((w, state.slot(w).cloned()));
                state.set_slot(w, Some(Slot { begin, items }));
            }
            None => {
                for (w, slot) in saved.into_iter().rev() {
                    state.set_slot(w, slot);
                }
                return Err(w);
            }
        }
    }
    state.set_plan(i, Some(pieces.to_vec()));
    Ok(())
}
