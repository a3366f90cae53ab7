//! Greedy construction of feasible schedules: cutting data into pieces over
//! windows, then confirming each piece's transmission slot.

mod layout;
mod odcs;
mod srs;
mod state;

pub use layout::{capacity, earliest_begin};
pub use odcs::{odcs, WindowRule};
pub use srs::srs;
pub use state::{Slot, WindowState};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{DatumId, Instance, ObjectivePoint, Schedule, SolveMode};

/// How the window rule is chosen for each inserted datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RulePolicy {
    Fixed(WindowRule),
    /// A uniformly drawn rule per datum.
    Mixed,
}

/// Tries to schedule datum `i` whole. A window whose piece fails to place is
/// excluded and the cut recomputed; returns whether the datum was scheduled.
pub fn insert<R: Rng + ?Sized>(
    instance: &Instance,
    state: &mut WindowState,
    mode: SolveMode,
    i: usize,
    rule: WindowRule,
    rng: &mut R,
) -> bool {
    if state.is_scheduled(i) {
        return false;
    }
    let mut excluded = Vec::new();
    while let Some(plan) = odcs(instance, state, mode, i, rule, &excluded, rng) {
        match srs(instance, state, mode, i, &plan) {
            Ok(()) => return true,
            Err(w) => excluded.push(w),
        }
    }
    false
}

/// Inserts data in the given order. Each datum draws its own generator seed
/// up front, so one datum's choices never shift another's.
pub fn insert_all<R: Rng + ?Sized>(
    instance: &Instance,
    state: &mut WindowState,
    mode: SolveMode,
    order: &[usize],
    policy: RulePolicy,
    rng: &mut R,
) {
    for &i in order {
        let mut local = ChaCha8Rng::seed_from_u64(rng.random());
        let rule = match policy {
            RulePolicy::Fixed(rule) => rule,
            RulePolicy::Mixed => WindowRule::sample(&mut local),
        };
        if !instance.admissible_windows(i).is_empty() {
            insert(instance, state, mode, i, rule, &mut local);
        }
    }
}

/// A uniformly random visiting order over all data positions.
pub fn random_order<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.data().len()).collect();
    order.shuffle(rng);
    order
}

/// Greedy construction over `order` (data positions).
pub fn rhga_state<R: Rng + ?Sized>(
    instance: &Instance,
    mode: SolveMode,
    order: &[usize],
    policy: RulePolicy,
    rng: &mut R,
) -> WindowState {
    let mut state = WindowState::new(instance);
    insert_all(instance, &mut state, mode, order, policy, rng);
    state
}

/// Greedy construction over a permutation of datum ids. Unknown ids are
/// ignored.
pub fn rhga<R: Rng + ?Sized>(
    instance: &Instance,
    mode: SolveMode,
    order: &[DatumId],
    rng: &mut R,
) -> (Schedule, ObjectivePoint<f64>) {
    let order: Vec<usize> = order.iter().filter_map(|&id| instance.datum_pos(id)).collect();
    let state = rhga_state(instance, mode, &order, RulePolicy::Mixed, rng);
    (state.to_schedule(instance), state.objectives(instance))
}
