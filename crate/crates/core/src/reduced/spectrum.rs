use num_complex::Complex64;

use super::rates::{pointer_fields, reduced_rates, ReducedOptions, ReducedRates};
use super::steady::steady_state_p1;
use crate::error::{invalid, Result};
use crate::field::{solve_pointer_spectroscopy, Branch, PointerSolution};
use crate::fit::{fit_lorentzian, LorentzianFit};
use crate::model::{DriveSpec, Drives, QubitSpec, ResonatorSpec};
use crate::units::power_db;

/// One pump amplitude of a spectrum: populations across ω_s and the fitted
/// line.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumColumn {
    pub eps_p: f64,
    pub p1: Vec<f64>,
    /// Spectroscopy field at each ω_s.
    pub alpha_s: Vec<Complex64>,
    pub fit: LorentzianFit,
    pub branch: Branch,
    pub pointer: PointerSolution,
    pub rates: ReducedRates,
    pub breakdown: bool,
}

impl SpectrumColumn {
    pub fn power_db(&self) -> f64 {
        power_db(self.eps_p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub omega_p: f64,
    pub eps_s: f64,
    pub omega_s: Vec<f64>,
    pub columns: Vec<SpectrumColumn>,
}

/// Reduced-model rates at one pump point.
pub fn reduced_point(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: DriveSpec,
    opts: &ReducedOptions,
) -> Result<(PointerSolution, ReducedRates)> {
    let drives = Drives {
        pump,
        spectroscopy: None,
    };
    let p = pointer_fields(q, res, &drives, opts)?;
    let r = reduced_rates(q, res, &p, opts)?;
    Ok((p, r))
}

/// Populations across `omega_s` for one pump amplitude, with a Lorentzian
/// fit.
pub fn spectrum_column(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: DriveSpec,
    eps_s: f64,
    omega_s: &[f64],
    opts: &ReducedOptions,
) -> Result<SpectrumColumn> {
    if omega_s.is_empty() {
        return Err(invalid("omega_s", "empty axis"));
    }
    let (pointer, rates) = reduced_point(q, res, pump, opts)?;
    let a0 = pointer.states[0].alpha_p;
    let g0 = q.couplings()[0];
    let mut p1 = Vec::with_capacity(omega_s.len());
    let mut alpha_s = Vec::with_capacity(omega_s.len());
    for &ws in omega_s {
        let a = solve_pointer_spectroscopy(res, a0, Complex64::new(eps_s, 0.0), ws);
        alpha_s.push(a);
        p1.push(steady_state_p1(&rates, a * g0, rates.omega10_3 - ws)?);
    }
    let fit = fit_lorentzian(omega_s, &p1);
    if !fit.converged {
        log::warn!("Lorentzian fit did not converge at eps_p = {}", pump.epsilon.norm());
    }
    Ok(SpectrumColumn {
        eps_p: pump.epsilon.norm(),
        p1,
        alpha_s,
        fit,
        branch: pointer.states[0].branch,
        breakdown: rates.breakdown(res.kappa),
        pointer,
        rates,
    })
}

/// Reduced-model spectrum over pump amplitudes `eps_p` and spectroscopy
/// frequencies `omega_s` at pump frequency `omega_p`.
pub fn spectrum(
    q: &QubitSpec,
    res: &ResonatorSpec,
    omega_p: f64,
    eps_p: &[f64],
    omega_s: &[f64],
    eps_s: f64,
    opts: &ReducedOptions,
) -> Result<SpectrumGrid> {
    if eps_p.is_empty() {
        return Err(invalid("eps_p", "empty axis"));
    }
    let columns = eps_p
        .iter()
        .map(|&e| spectrum_column(q, res, DriveSpec::pump(e, omega_p), eps_s, omega_s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumGrid {
        omega_p,
        eps_s,
        omega_s: omega_s.to_vec(),
        columns,
    })
}
