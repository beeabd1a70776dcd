//! Brute-force Lindblad reference for the reduced model.

mod config;
pub mod evolve;
mod generator;
pub mod integrator;
pub mod micro;
mod spectrum;

pub use config::HilbertConfig;
pub use evolve::{evolve, rre, evolve_to_steady, min_eigenvalue, Diagnostics, SteadyResult};
pub use generator::Generator;
pub use spectrum::{
    oracle_column, oracle_point, oracle_spectrum, probe_axis, FockCheck, OracleColumn, OracleGrid, OraclePoint, OracleState,
};
