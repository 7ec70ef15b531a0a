//! Numerical toolkit for magnetic Hardy inequalities on the Heisenberg group.
//!
//! The crate is organised bottom-up: [`jet`] and [`quadrature`] are the
//! numerical primitives, [`heisenberg`] provides the geometry, [`forms`] the
//! horizontal differential forms and gauges, [`spectral1d`] and [`fibers`] the
//! eigenvalue computations, and [`harness`] the quotient and identity checks.

pub mod error;
pub mod fibers;
pub mod forms;
pub mod harness;
pub mod heisenberg;
pub mod jet;
pub mod quadrature;
pub mod spectral1d;

pub use error::{Error, Result};
pub use num_complex::Complex64;
