use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A time instant or duration in whole milliseconds since the instance epoch.
///
/// Every time quantity in the model lives on the millisecond grid, so all
/// feasibility comparisons are exact integer comparisons. Files carry
/// seconds; conversion happens at the boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Millis(pub i64);

impl Millis {
    pub const ZERO: Millis = Millis(0);
    pub const PER_SECOND: i64 = 1_000;
    pub const PER_HOUR: i64 = 3_600_000;

    pub const fn from_ms(ms: i64) -> Self {
        Millis(ms)
    }

    pub const fn from_secs_int(secs: i64) -> Self {
        Millis(secs * Self::PER_SECOND)
    }

    pub const fn from_hours(hours: i64) -> Self {
        Millis(hours * Self::PER_HOUR)
    }

    /// Rounds a seconds value to the nearest millisecond.
    pub fn from_secs(secs: f64) -> Self {
        Millis((secs * Self::PER_SECOND as f64).round() as i64)
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / Self::PER_SECOND as f64
    }

    pub const fn ms(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Add for Millis {
    type Output = Millis;
    fn add(self, rhs: Millis) -> Millis {
        Millis(self.0 + rhs.0)
    }
}

impl Sub for Millis {
    type Output = Millis;
    fn sub(self, rhs: Millis) -> Millis {
        Millis(self.0 - rhs.0)
    }
}

impl Neg for Millis {
    type Output = Millis;
    fn neg(self) -> Millis {
        Millis(-self.0)
    }
}

impl AddAssign for Millis {
    fn add_assign(&mut self, rhs: Millis) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Millis {
    fn sub_assign(&mut self, rhs: Millis) {
        self.0 -= rhs.0;
    }
}

impl Sum for Millis {
    fn sum<I: Iterator<Item = Millis>>(iter: I) -> Millis {
        Millis(iter.map(|m| m.0).sum())
    }
}

impl<'a> Sum<&'a Millis> for Millis {
    fn sum<I: Iterator<Item = &'a Millis>>(iter: I) -> Millis {
        Millis(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for Millis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s", self.as_secs())
    }
}
