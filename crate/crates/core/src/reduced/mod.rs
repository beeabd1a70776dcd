//! Reduced two-level qubit model: rates, steady-state population and spectra.

pub mod rates;
pub mod spectrum;
pub mod steady;

pub use rates::{
    pointer_fields, quantum_limit_ratio, reduced_rates, DressedDephasing, FieldModel, ReducedOptions,
    ReducedRates,
};
pub use spectrum::{reduced_point, spectrum, spectrum_column, SpectrumColumn, SpectrumGrid};
pub use steady::{analytic_hwhm, steady_state_p1};
