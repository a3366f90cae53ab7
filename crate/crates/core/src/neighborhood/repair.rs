use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::Rng;

use super::guidance::Guidance;
use super::{RepairOp, TabooBank};
use crate::construct::{insert_all, RulePolicy, WindowState};
use crate::model::{Instance, SolveMode};

/// Reinserts unscheduled data outside the bank in the order of `op`.
#[allow(clippy::too_many_arguments)]
pub fn repair<R: Rng + ?Sized>(
    instance: &Instance,
    guidance: &Guidance,
    state: &mut WindowState,
    mode: SolveMode,
    op: RepairOp,
    bank: &TabooBank,
    policy: RulePolicy,
    rng: &mut R,
) {
    let data = instance.data();
    let mut candidates: Vec<usize> = state
        .unscheduled()
        .filter(|&i| !bank.contains(i) && !instance.admissible_windows(i).is_empty())
        .collect();
    candidates.sort_by_key(|&i| data[i].id);
    match op {
        RepairOp::R => candidates.shuffle(rng),
        RepairOp::P => candidates.sort_by_key(|&i| (Reverse(data[i].priority), data[i].id)),
        RepairOp::S => candidates.sort_by_key(|&i| (instance.admissible_windows(i).len(), data[i].id)),
        RepairOp::C => candidates.sort_by(|&a, &b| {
            guidance.congestion(a).total_cmp(&guidance.congestion(b)).then(data[a].id.cmp(&data[b].id))
        }),
    }
    insert_all(instance, state, mode, &candidates, policy, rng);
}
