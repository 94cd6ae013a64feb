//! Deadline-constrained execution of action sequences on reconfigurable
//! machines, modelled as cumulative weighted transition systems.
//!
//! The crate builds execution systems for fixed, nondeterministic and
//! slack-guarded reconfiguration schemes, computes offline-optimal energy
//! schedules, and decides simulation, by-simulation, betterment and
//! constant-factor simulation between them.

pub mod cli;
pub mod desk;
pub mod error;
pub mod exec;
mod json;
pub mod machine;
pub mod num;
pub mod relations;
pub mod ts;
pub mod weight;
pub mod workload;

pub use error::{Error, Result};
pub use num::Fixed;
