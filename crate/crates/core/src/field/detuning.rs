use crate::error::Result;
use crate::model::{lamb_shift_chain, QubitSpec, ResonatorSpec};
use crate::units::OMEGA_CRITICAL;

/// Resonator frequency that the reduced detuning is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetuningReference {
    /// Bare ω_r.
    Bare,
    /// ω_r pulled by the qubit in its ground state at zero field.
    #[default]
    Pulled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDetuning {
    /// Ω = 2(ω_ref − ω_p)/κ.
    pub omega: f64,
    /// Ω/Ω_C.
    pub ratio: f64,
    pub reference_mhz: f64,
}

/// ω_r, or ω_r + S_0(α → 0) for [`DetuningReference::Pulled`].
pub fn reference_frequency(q: &QubitSpec, res: &ResonatorSpec, reference: DetuningReference) -> Result<f64> {
    Ok(match reference {
        DetuningReference::Bare => res.omega_r,
        DetuningReference::Pulled => {
            let s = lamb_shift_chain(q, res, q.omega(), 0.0)?;
            res.omega_r + s.pull[0]
        }
    })
}

pub fn reduced_detuning(
    q: &QubitSpec,
    res: &ResonatorSpec,
    omega_p: f64,
    reference: DetuningReference,
) -> Result<ReducedDetuning> {
    let w = reference_frequency(q, res, reference)?;
    let omega = 2.0 * (w - omega_p) / res.kappa;
    Ok(ReducedDetuning {
        omega,
        ratio: omega / OMEGA_CRITICAL,
        reference_mhz: w,
    })
}

/// Pump frequency giving Ω/Ω_C = `ratio`.
pub fn pump_for_ratio(
    q: &QubitSpec,
    res: &ResonatorSpec,
    ratio: f64,
    reference: DetuningReference,
) -> Result<f64> {
    let w = reference_frequency(q, res, reference)?;
    Ok(w - ratio * OMEGA_CRITICAL * res.kappa / 2.0)
}
