//! Simulation and exact-computation toolkit for the frog model on complete
//! graphs.
//!
//! Particles sit one per vertex; the root's particle starts active. Every
//! active particle dies with probability `1 - p` per step, otherwise jumps to
//! a uniform neighbour and wakes the sleeping particle there. The quantity of
//! interest is `V_inf`, the number of distinct vertices ever visited.
//!
//! * [`model`] shared parameters, round outcomes and seeded RNG substreams
//! * [`aux`] the single-particle-per-round auxiliary chain and its couplings
//! * [`frog`] direct particle simulation on arbitrary connected graphs
//! * [`exact`] the exact law of `V_inf` on `K_N` by dynamic programming
//! * [`branching`] Galton-Watson comparison processes and extinction
//! * [`theory`] asymptotic constants, Chernoff bound and the bound chain
//! * [`experiments`] replica orchestration and tail-probability reports

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aux;
pub mod branching;
mod error;
pub mod exact;
pub mod experiments;
pub mod frog;
pub mod model;
pub mod theory;

pub use error::{Error, Result};
pub use model::{substream, validate_params, RngStream, RoundOutcome, SimParams};

/// Crate version, embedded in every exported artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
