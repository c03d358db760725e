//! Capacity bounds and compress-forward rates for Gaussian networks with one
//! source, any number of relays and one destination.
//!
//! - [`gaussian`]: log-determinants and conditional mutual information.
//! - [`topology`]: nodes, powers, noise, path-loss or explicit gains.
//! - [`enumeration`]: relay subsets, set partitions, receiver assignments.
//! - [`bounds`]: cut rates, quantization feasibility and search, sweeps.
//! - [`verify`]: seeded self-check suites.
//!
//! Rates are in bits per channel use.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod enumeration;
mod error;
pub mod exec;
pub mod gaussian;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use exec::{Exec, Settings};
