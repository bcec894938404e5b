//! Deterministic simulator and optimization toolkit for RIS-enabled UAV
//! networks: far-field link budgets, flight-time prediction under surface
//! payload, zero-forcing uplink spectral efficiency, grid-averaged secrecy
//! rate, and coordinate-descent / particle-swarm optimization of surface
//! phases, transmit powers, and UAV placement.

// Validation uses `!(v > 0.0)` instead of `v <= 0.0` so NaN inputs are
// rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod defaults;
pub mod energy;
pub mod exp;
pub mod linkbudget;
pub mod metrics;
pub mod optim;
pub mod scenario;

#[cfg(test)]
pub(crate) mod testutil;
