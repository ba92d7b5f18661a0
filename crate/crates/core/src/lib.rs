//! Elastic energies on framed curves.
//!
//! * [`frames`] reconstructs curves from curvature/torsion profiles with
//!   exact per-step rotations and measures closure.
//! * [`energy`] holds the density catalog, energy quadrature and hypothesis
//!   probes.
//! * [`critical`] integrates the critical-point systems and certifies their
//!   solutions.
//! * [`shooting`] searches and refines ODE constants for closed curves.
//! * [`minimize`] minimizes the discretized energy under penalized closure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod energy;
pub mod error;
pub mod frames;
pub mod minimize;
pub mod nelder_mead;
pub mod ode;
pub mod parallel;
pub mod quadrature;
pub mod shooting;

pub use error::{Error, Result};
