use rand::Rng;

use super::sort::crowding_distance;
use crate::model::ObjectivePoint;

/// Which member leaves an over-full archive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// The most crowded member, ties by lowest position.
    Crowding,
    /// A uniformly random member.
    Random,
}

/// A bounded, mutually nondominated store without objective duplicates.
#[derive(Clone, Debug)]
pub struct Archive<P> {
    members: Vec<(ObjectivePoint<f64>, P)>,
    capacity: usize,
    truncation: Truncation,
}

impl<P> Archive<P> {
    pub fn new(capacity: usize, truncation: Truncation) -> Self {
        assert!(capacity > 0, "archive capacity must be positive");
        Archive { members: Vec::new(), capacity, truncation }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(ObjectivePoint<f64>, P)] {
        &self.members
    }

    pub fn points(&self) -> Vec<ObjectivePoint<f64>> {
        self.members.iter().map(|m| m.0).collect()
    }

    pub fn into_members(self) -> Vec<(ObjectivePoint<f64>, P)> {
        self.members
    }

    /// Offers a solution; returns whether it was admitted.
    pub fn offer<R: Rng + ?Sized>(&mut self, point: ObjectivePoint<f64>, payload: P, rng: &mut R) -> bool {
        if self.members.iter().any(|(m, _)| m.covers(&point)) {
            return false;
        }
        self.members.retain(|(m, _)| !point.dominates(m));
        self.members.push((point, payload));
        while self.members.len() > self.capacity {
            let victim = match self.truncation {
                Truncation::Random => rng.random_range(0..self.members.len()),
                Truncation::Crowding => {
                    let d = crowding_distance(&self.points());
                    (0..d.len()).min_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b))).expect("non-empty")
                }
            };
            self.members.remove(victim);
        }
        true
    }
}
