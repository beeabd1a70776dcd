//! Driven qubit coupled to a Kerr nonlinear resonator: pointer-state field
//! solver, reduced qubit model and a brute-force Lindblad reference.
//!
//! Frequencies and rates are ν = ω/2π in MHz throughout; time is in µs.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod fit;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod reduced;
pub mod units;

pub use error::{Error, Result};
