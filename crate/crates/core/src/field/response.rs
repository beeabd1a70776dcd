//! Expansion of the pointer fields in the dispersive pull around the
//! qubit-independent field ᾱ.
//!
//! With G(α, S) = A(|α|²) α + ε + S α and α = ᾱ + S x₁ + S² x₂:
//!
//!   J x₁ = −ᾱ,   J x₂ = −(N₂(x₁) + x₁),
//!
//! where J is the real-linear derivative of G at ᾱ and N₂ the quadratic part
//! of the Kerr terms.

use num_complex::Complex64;

use super::pointer::{select_branch, BranchPolicy};
use super::pump::PumpEquation;
use crate::error::{invalid, Error, Result};
use crate::model::{stark_coeffs, DriveSpec, QubitSpec, ResonatorSpec};
use crate::units::OMEGA_CRITICAL;

/// How the first-order field correction is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearResponseForm {
    /// Solution of the real 2×2 linearization; the exact derivative.
    #[default]
    Exact,
    /// α⁽¹⁾ = −S ᾱ / [(ω_r − ω_p − iκ/2) + 3K|ᾱ|²].
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseExpansion {
    pub alpha_bar: Complex64,
    /// ∂α/∂S and ½ ∂²α/∂S² at S = 0.
    pub x1: Complex64,
    pub x2: Complex64,
    /// Per qubit state: 𝕊_i, α⁽¹⁾ = 𝕊_i x₁ (or the closed form), α⁽²⁾ = 𝕊_i² x₂.
    pub pulls: Vec<f64>,
    pub alpha1: Vec<Complex64>,
    pub alpha2: Vec<Complex64>,
    /// |α⁽²⁾|/|α⁽¹⁾| per state, infinite where α⁽¹⁾ vanishes.
    pub ratio: Vec<f64>,
}

impl ResponseExpansion {
    /// ᾱ + α⁽¹⁾ for state `i`.
    pub fn linear_field(&self, i: usize) -> Complex64 {
        self.alpha_bar + self.alpha1[i]
    }
}

/// Quadratic part of (K − iκ_NL)|α|²α + K′|α|⁴α around `a` in direction `h`.
fn quadratic_term(eq: &PumpEquation, a: Complex64, h: Complex64) -> Complex64 {
    let k = Complex64::new(eq.kerr, -eq.kappa_nl);
    let ac = a.conj();
    let hh = h.norm_sqr();
    k * (ac * h * h + 2.0 * a * hh)
        + eq.kerr3 * (a * a * a * h.conj() * h.conj() + 6.0 * a * a * ac * hh + 3.0 * a * ac * ac * h * h)
}

/// (x₁, x₂) at the root `alpha_bar` of `eq`.
pub fn response_derivatives(eq: &PumpEquation, alpha_bar: Complex64) -> Result<(Complex64, Complex64)> {
    let singular = || Error::Numerical("linearization is singular at a turning point".into());
    let x1 = eq.solve_linear(alpha_bar, -alpha_bar).ok_or_else(singular)?;
    let x2 = eq
        .solve_linear(alpha_bar, -(quadratic_term(eq, alpha_bar, x1) + x1))
        .ok_or_else(singular)?;
    Ok((x1, x2))
}

pub fn linear_response_fields(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    policy: BranchPolicy,
    form: LinearResponseForm,
) -> Result<ResponseExpansion> {
    let coeffs = stark_coeffs(q, pump.omega)?;
    let eq = PumpEquation::bare(res, pump.omega);
    let (root, _, _) = select_branch(&eq, pump.epsilon, policy)?;
    let ab = root.alpha;
    let (x1, x2) = response_derivatives(&eq, ab)?;
    let closed = Complex64::new(eq.detuning, -0.5 * eq.kappa) + 3.0 * eq.kerr * ab.norm_sqr();
    let pulls = coeffs.s2.clone();
    let alpha1: Vec<Complex64> = pulls
        .iter()
        .map(|&s| match form {
            LinearResponseForm::Exact => x1 * s,
            LinearResponseForm::ClosedForm => -ab * s / closed,
        })
        .collect();
    let alpha2: Vec<Complex64> = pulls.iter().map(|&s| x2 * s * s).collect();
    let ratio = alpha1
        .iter()
        .zip(&alpha2)
        .map(|(a1, a2)| if a1.norm() == 0.0 { f64::INFINITY } else { a2.norm() / a1.norm() })
        .collect();
    Ok(ResponseExpansion {
        alpha_bar: ab,
        x1,
        x2,
        pulls,
        alpha1,
        alpha2,
        ratio,
    })
}

/// r = |α⁽²⁾|/|α⁽¹⁾| for qubit state `state`.
pub fn quadratic_response_ratio(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    state: usize,
    policy: BranchPolicy,
) -> Result<f64> {
    let e = linear_response_fields(q, res, pump, policy, LinearResponseForm::Exact)?;
    e.ratio
        .get(state)
        .copied()
        .ok_or(Error::UnsolvedPointer { state })
}

/// One point of the linear-response validity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMaxPoint {
    pub ratio: f64,
    pub omega_p: f64,
    /// Pump amplitude of maximum gain |∂ᾱ/∂ω_p|; NaN beyond the critical
    /// detuning.
    pub eps_gain: f64,
    pub gain: f64,
    /// Largest pull keeping |α⁽²⁾|/|α⁽¹⁾| ≤ r_threshold at the gain point.
    pub s_max: f64,
}

/// |x₁| and |x₂| at photon number `n` on the bare equation.
fn gain_at(eq: &PumpEquation, n: f64) -> Result<(f64, Complex64, Complex64)> {
    let eps = eq.response(n).0.sqrt();
    let alpha = eq.polish(-eps / eq.a(n), Complex64::new(eps, 0.0));
    let (x1, x2) = response_derivatives(eq, alpha)?;
    Ok((eps, x1, x2))
}

/// Maximizes the gain over the pump amplitude for the bare equation, which
/// must be mono-valued. Returns (ε, x₁, x₂) at the maximum.
pub fn gain_point(eq: &PumpEquation) -> Result<(f64, Complex64, Complex64)> {
    if eq.kerr == 0.0 && eq.kerr3 == 0.0 {
        return Err(invalid("kerr", "the gain of a linear resonator has no maximum"));
    }
    // n|A(n)|² is monotone, so scan in log n rather than in ε.
    let k = eq.kerr.abs().max(eq.kerr3.abs().sqrt());
    let n_max = 20.0 * (eq.detuning.abs() + eq.kappa) / k;
    let (lo, hi) = ((n_max * 1e-7).ln(), n_max.ln());
    let steps = 240;
    let g = |t: f64| gain_at(eq, t.exp()).map(|(_, x1, _)| x1.norm());
    let mut best = (lo, f64::NEG_INFINITY);
    for s in 0..=steps {
        let t = lo + (hi - lo) * s as f64 / steps as f64;
        let v = g(t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    // Golden-section refinement on the bracketing cells.
    let h = (hi - lo) / steps as f64;
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    while b - a > 1e-10 {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d)?;
        }
    }
    gain_at(eq, (0.5 * (a + b)).exp())
}

/// S_max over reduced detunings measured from the bare resonator. Beyond the
/// critical detuning the gain diverges at the switching threshold and S_max
/// is reported as 0.
pub fn s_max_curve(res: &ResonatorSpec, ratios: &[f64], r_threshold: f64) -> Result<Vec<SMaxPoint>> {
    if !(r_threshold >= 0.0) {
        return Err(invalid("r_threshold", "must be >= 0"));
    }
    ratios
        .iter()
        .map(|&ratio| {
            let wp = res.omega_r - ratio * OMEGA_CRITICAL * res.kappa / 2.0;
            let eq = PumpEquation::bare(res, wp);
            if eq.has_bistability() {
                return Ok(SMaxPoint {
                    ratio,
                    omega_p: wp,
                    eps_gain: f64::NAN,
                    gain: f64::INFINITY,
                    s_max: 0.0,
                });
            }
            let (eps, x1, x2) = gain_point(&eq)?;
            Ok(SMaxPoint {
                ratio,
                omega_p: wp,
                eps_gain: eps,
                gain: x1.norm(),
                s_max: r_threshold * x1.norm() / x2.norm(),
            })
        })
        .collect()
}
