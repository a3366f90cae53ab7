//! Destroy and repair operators, their guidance values and the taboo bank.

mod destroy;
mod guidance;
mod repair;

pub use destroy::{destroy, remove_data};
pub use guidance::{conflict_distance, congestion, nod, Guidance, TaskGuidance};
pub use repair::repair;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DestroyOp {
    /// Random data.
    Rd,
    /// Lowest priority first.
    Pd,
    /// Longest duration first.
    Dd,
    /// Least congested first.
    Cd,
    /// Random tasks.
    Rt,
    /// Tasks carrying the most priority first.
    Pt,
    /// Longest tasks first.
    Wt,
    /// Least congested tasks first.
    Ct,
}

impl DestroyOp {
    pub const ALL: [DestroyOp; 8] =
        [DestroyOp::Rd, DestroyOp::Pd, DestroyOp::Dd, DestroyOp::Cd, DestroyOp::Rt, DestroyOp::Pt, DestroyOp::Wt, DestroyOp::Ct];

    pub fn name(self) -> &'static str {
        ["RD", "PD", "DD", "CD", "RT", "PT", "WT", "CT"][self as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepairOp {
    /// Random order.
    R,
    /// Highest priority first.
    P,
    /// Fewest admissible windows first.
    S,
    /// Least congested first.
    C,
}

impl RepairOp {
    pub const ALL: [RepairOp; 4] = [RepairOp::R, RepairOp::P, RepairOp::S, RepairOp::C];

    pub fn name(self) -> &'static str {
        ["R", "P", "S", "C"][self as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Destroy,
    Repair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Destroy(DestroyOp),
    Repair(RepairOp),
}

impl OperatorKind {
    pub fn family(self) -> Family {
        match self {
            OperatorKind::Destroy(_) => Family::Destroy,
            OperatorKind::Repair(_) => Family::Repair,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Destroy(op) => op.name(),
            OperatorKind::Repair(op) => op.name(),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        DestroyOp::ALL
            .iter()
            .map(|&op| OperatorKind::Destroy(op))
            .chain(RepairOp::ALL.iter().map(|&op| OperatorKind::Repair(op)))
            .find(|k| k.name() == upper)
            .ok_or_else(|| format!("unknown operator `{s}`"))
    }
}

/// How the taboo ratio is drawn on each destroy call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TabooPolicy {
    /// `TR ~ U[0, max]` per call.
    Adaptive { max: f64 },
    /// A fixed ratio.
    Static(f64),
}

impl Default for TabooPolicy {
    fn default() -> Self {
        TabooPolicy::Adaptive { max: 0.2 }
    }
}

impl TabooPolicy {
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            TabooPolicy::Adaptive { max } => rng.random::<f64>() * max,
            TabooPolicy::Static(tr) => tr,
        }
    }
}

/// Data removed by the last destroy call; barred from the following repair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TabooBank {
    pub members: BTreeSet<usize>,
    pub capacity: usize,
}

impl TabooBank {
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
