use serde::{Deserialize, Serialize};

use super::schedule::Schedule;
use super::time::Millis;
use super::types::Instance;
use crate::scalar::Scalar;

/// A point in objective space; both coordinates are minimised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObjectivePoint<T> {
    /// Priority-weighted failure rate.
    pub f1: T,
    /// Service-balance degree.
    pub f2: T,
}

impl<T: Scalar> ObjectivePoint<T> {
    pub fn new(f1: T, f2: T) -> Self {
        ObjectivePoint { f1, f2 }
    }

    /// Pareto dominance under minimisation.
    pub fn dominates(&self, other: &Self) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2 && (self.f1 < other.f1 || self.f2 < other.f2)
    }

    /// Weak dominance: no worse in both coordinates.
    pub fn covers(&self, other: &Self) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2
    }
}

impl ObjectivePoint<f64> {
    pub fn cast<U: Scalar>(self) -> Option<ObjectivePoint<U>> {
        Some(ObjectivePoint { f1: U::from_f64(self.f1)?, f2: U::from_f64(self.f2)? })
    }
}

/// `1 − (scheduled priority mass) / (total priority mass)`; zero when the
/// instance holds no data.
pub fn failure_rate_from<I>(instance: &Instance, scheduled: I) -> f64
where
    I: IntoIterator<Item = usize>,
{
    let total = instance.total_priority();
    if total == 0 {
        return 0.0;
    }
    let done: u64 = scheduled.into_iter().map(|i| instance.data()[i].priority as u64).sum();
    1.0 - done as f64 / total as f64
}

/// Mean over satellites that own windows of `1 − UR_s`, where `UR_s` is the
/// mean per-window utilisation. `load(w)` is the task duration placed in
/// window position `w`.
pub fn service_balance_from<F>(instance: &Instance, load: F) -> f64
where
    F: Fn(usize) -> Millis,
{
    let mut sum = 0.0;
    let mut counted = 0usize;
    for s in 0..instance.satellites().len() {
        let windows = instance.satellite_windows(s);
        if windows.is_empty() {
            continue;
        }
        let ur: f64 = windows
            .iter()
            .map(|&w| load(w).ms() as f64 / instance.windows()[w].len().ms() as f64)
            .sum::<f64>()
            / windows.len() as f64;
        sum += 1.0 - ur;
        counted += 1;
    }
    if counted == 0 {
        1.0
    } else {
        sum / counted as f64
    }
}

/// Failure rate of a structurally valid schedule.
pub fn failure_rate(instance: &Instance, schedule: &Schedule) -> f64 {
    failure_rate_from(instance, schedule.scheduled.iter().filter_map(|&id| instance.datum_pos(id)))
}

/// Service-balance degree of a structurally valid schedule.
pub fn service_balance(instance: &Instance, schedule: &Schedule) -> f64 {
    let mut loads = vec![Millis::ZERO; instance.windows().len()];
    for task in &schedule.tasks {
        if let Some(w) = instance.window_pos(task.window) {
            loads[w] += task.duration;
        }
    }
    service_balance_from(instance, |w| loads[w])
}

pub fn evaluate(instance: &Instance, schedule: &Schedule) -> ObjectivePoint<f64> {
    ObjectivePoint { f1: failure_rate(instance, schedule), f2: service_balance(instance, schedule) }
}
