use num_complex::Complex64;

use super::rates::ReducedRates;
use crate::error::{Error, Result};

/// Excited-state population of the driven reduced qubit,
///
/// P = [γ↑(γ₂² + δ²) + 2γ₂|G|²] / [(γ↑ + γ↓)(γ₂² + δ²) + 4γ₂|G|²],
///
/// with G = g₀ α_{0,s} and δ = ω₁₀‴ − ω_s.
pub fn steady_state_p1(rates: &ReducedRates, g0_alpha_s: Complex64, delta: f64) -> Result<f64> {
    p1(rates.gamma_up, rates.gamma_down, rates.gamma2, g0_alpha_s.norm_sqr(), delta)
}

/// [`steady_state_p1`] on bare rates; `drive2` = |g₀ α_{0,s}|².
pub fn p1(gamma_up: f64, gamma_down: f64, gamma2: f64, drive2: f64, delta: f64) -> Result<f64> {
    let l = gamma2 * gamma2 + delta * delta;
    let num = gamma_up * l + 2.0 * gamma2 * drive2;
    let den = (gamma_up + gamma_down) * l + 4.0 * gamma2 * drive2;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::NoUniqueSteadyState);
    }
    Ok(num / den)
}

/// Centre offset 0 and half width at half maximum of the line P(δ), which is
/// an exact Lorentzian in δ: HWHM² = γ₂² + 4γ₂|G|²/(γ↑ + γ↓).
pub fn analytic_hwhm(rates: &ReducedRates, g0_alpha_s: Complex64) -> f64 {
    let g2 = rates.gamma2;
    (g2 * g2 + 4.0 * g2 * g0_alpha_s.norm_sqr() / (rates.gamma_up + rates.gamma_down)).sqrt()
}
