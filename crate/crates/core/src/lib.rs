//! Entanglement polytopes for multi-qubit pure states.
//!
//! The crate has five layers:
//!
//! * [`qcore`] — dense pure-state algebra (states, local operators,
//!   post-selection, reduced density matrices, local spectra),
//! * [`polytope`] — the catalog of three- and four-qubit entanglement
//!   polytopes with exact-rational membership tests and facet systems,
//! * [`filter`] — the single-filter post-selection protocol that moves a
//!   state's spectra vector around its polytope,
//! * [`montecarlo`] — Haar-random sampling of polytope occupation fractions,
//! * [`tomo`] — simulated tomography with Poisson counting noise and
//!   bootstrap error bars.

pub mod error;
pub mod filter;
pub mod montecarlo;
pub mod polytope;
pub mod qcore;
pub mod rng;
pub mod tomo;

pub use error::{Error, Result};
