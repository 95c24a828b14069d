//! Quotient-space algebra for dimension-varying linear control systems.
//!
//! The crate decides whether a transient between two state-space models of
//! different dimensions can be realized, builds the blended transient model
//! on the lcm-dimension space, and simulates steered transients.

pub mod cli;
pub mod controllability;
mod error;
pub mod mixdim;
pub mod numerics;
pub mod realization;
pub mod simulation;
pub mod systems;

pub use error::{Error, Result};
