//! Galerkin solver and decay diagnostics for the one-dimensional damped wave
//! equation with coupled two-point boundary conditions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compat;
pub mod diagnostics;
pub mod error;
pub mod galerkin;
pub mod integrate;
pub mod manufactured;
pub mod output;
pub mod params;
pub mod props;
pub mod scenario;

pub use error::{Error, Result};
