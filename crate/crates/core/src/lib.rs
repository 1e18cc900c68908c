//! Periodic XXZ spin chains: exact ground states, geometric entanglement
//! and detection of the first-order and Kosterlitz-Thouless transitions.
//!
//! The chain Hamiltonian is
//!
//! ```text
//! H = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + gamma Z_i Z_{i+1}) + b_z sum_i Z_i,   site N+1 == site 1
//! ```
//!
//! Basis index convention: qubit 1 is the most significant bit, so `|0101>`
//! is index 5 for four sites.
//!
//! Modules:
//! - [`spin_model`]: Hamiltonian construction, dense diagonalization, states and overlaps.
//! - [`closed_form`]: analytic ground state and candidate overlaps of the four-site ring.
//! - [`geometric`]: maximal product-state overlap by alternating sweeps, and the
//!   geometric entanglement `E = -log2(lambda_max^2)`.
//! - [`scan`]: gamma and beta scans, decay emulation, polynomial fits, crossing and
//!   jump detection.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod error;
pub mod geometric;
pub mod scan;
pub mod spin_model;

pub use error::{Error, Result};
pub use num_complex::Complex64;
