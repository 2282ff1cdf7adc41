//! SAIQH compartmental epidemic model on bounded closed time scales.
//!
//! The crate simulates the six-compartment system on any mixture of
//! isolated points and intervals, derives eventual permanence bounds, and
//! evaluates a uniform asymptotic stability certificate (constants `A_i`,
//! `B_i`, decay rate `psi` and its regressivity) that can be checked against
//! pairs of simulated trajectories.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod model;
pub mod solver;
pub mod timescale;

pub use error::{Error, Result};
pub use model::{SaiqhParams, State};
pub use solver::{simulate, Sample, Trajectory};
pub use timescale::{comparison_bound, GridPoint, TimeScale};
