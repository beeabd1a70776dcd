//! Frequency conventions.
//!
//! Every frequency and rate in this crate is an ordinary frequency ν = ω/2π
//! in MHz. Because every reduced-model expression is homogeneous of degree one
//! in frequency, the angular factor only matters where time enters, i.e. in the
//! Lindblad oracle, which works in rad/µs with time in µs.

use std::f64::consts::TAU;

/// Converts ν (MHz) to an angular frequency in rad/µs.
#[inline]
pub fn angular(mhz: f64) -> f64 {
    TAU * mhz
}

/// Drive amplitude on the logarithmic power axis, 20·log10(ε/2π · 1/MHz).
pub fn power_db(eps_mhz: f64) -> f64 {
    20.0 * eps_mhz.abs().log10()
}

/// Inverse of [`power_db`].
pub fn amplitude_from_db(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Detuning below which a transition is treated as resonant with a drive (1 kHz).
pub const RESONANCE_GUARD_MHZ: f64 = 1e-3;

/// Critical reduced detuning of a Kerr resonator, Ω_C = √3.
pub const OMEGA_CRITICAL: f64 = 1.732_050_807_568_877_2;
