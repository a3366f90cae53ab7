//! Bi-objective scheduling of satellite image data downlinks with data
//! segmentation and out-of-order transmission.
//!
//! The crate is organised bottom-up: [`model`] owns the domain and the
//! constraint system, [`construct`] builds feasible schedules, the
//! [`neighborhood`] and [`adaptive`] layers drive the [`evolve`] loop, and
//! [`metrics`] scores the resulting fronts.

pub mod adaptive;
pub mod cli;
pub mod construct;
pub mod encoding;
pub mod error;
pub mod evolve;
pub mod fixtures;
pub mod instances;
pub mod metrics;
pub mod model;
pub mod neighborhood;
pub mod oracle;
pub mod scalar;

pub use model::{Instance, Millis, ObjectivePoint, Schedule, SolveMode};
pub use scalar::Scalar;

/// Objective point in the default floating-point backend.
pub type Objectives = ObjectivePoint<f64>;
/// Objective point over exact rationals.
pub type ExactPoint = ObjectivePoint<num_rational::Ratio<i64>>;
