//! Domain types and the dispersive/ac-Stark coefficient algebra.

mod drive;
mod qubit;
mod resonator;
pub mod stark;
pub mod transmon;

pub use drive::{DriveRole, DriveSpec, Drives};
pub use qubit::QubitSpec;
pub use resonator::ResonatorSpec;
pub use stark::{lamb_shift_chain, stark_coeffs, stark_shifted_freqs, ShiftedSpectrum, StarkCoeffs};
pub use transmon::{build_transmon, fit_transmon, TransmonParams};

/// Qubit and resonator parameters of the device used for the reference
/// spectroscopy data (three transmon levels).
pub fn reference_device() -> (QubitSpec, ResonatorSpec) {
    let qubit = QubitSpec::from_transitions(&[5720.0, 5421.6], &[42.4, 58.4], 0.22, 0.25)
        .expect("reference qubit is valid");
    let resonator =
        ResonatorSpec::new(6453.5, -0.625, -0.00125, 9.6, 0.0).expect("reference resonator is valid");
    (qubit, resonator)
}
