//! Benchmarking framework for population-based metaheuristics under
//! objective-space transformations.
//!
//! The crate provides a seeded suite of shifted and rotated test functions
//! ([`suite`]), translation/scaling/rotation/vertical-shift wrappers
//! ([`transforms`]), budget-metered optimizers ([`optimizers`]), the
//! inverse-regression replacement operator ([`hybrid`]), a deterministic
//! experiment runner ([`harness`]), the statistical battery ([`stats`]) and
//! table/figure data generation ([`report`]).

pub mod error;
pub mod fitness;
pub mod harness;
pub mod hybrid;
pub mod objective;
pub mod optimizers;
pub mod report;
pub mod seed;
pub mod stats;
pub mod suite;
pub mod transforms;

pub use error::{Error, Result};
pub use fitness::Fitness;
pub use objective::{Bounds, Evaluator, Objective};
