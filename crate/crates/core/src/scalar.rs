//! Scalar abstraction for the objective-space machinery.
//!
//! Pareto sorting, hypervolume and the adaptive weight algebra only need
//! field arithmetic and an ordering, so they are written against [`Scalar`]
//! and work unchanged for `f32`, `f64` and exact rationals such as
//! [`num_rational::Ratio<i64>`]. Crowding distance needs an infinity and is
//! bounded by [`num_traits::Float`] instead.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive {
    /// Smaller of two values; the left operand wins ties.
    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    /// Larger of two values; the left operand wins ties.
    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive {}
