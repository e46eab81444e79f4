//! Fifth-order WENO finite differences on sparse grids.
//!
//! Each semi-coarsened grid of a combination family is advanced
//! independently with WENO5 fluxes and SSP-RK3; the combination technique
//! then superposes the prolonged solutions on the finest grid.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod combine;
pub mod diag;
pub mod grid;
pub mod interp;
pub mod models;
pub mod par;
pub mod timestep;
pub mod weno;

mod error;

pub use error::{Error, Result};
