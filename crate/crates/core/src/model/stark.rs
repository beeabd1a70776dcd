//! Quadratic and quartic ac-Stark coefficients and the field-dependent Lamb
//! shift chain.

use crate::error::{Error, Result};
use crate::model::{QubitSpec, ResonatorSpec};
use crate::units::RESONANCE_GUARD_MHZ;

/// Per-level ac-Stark coefficients of one drive at frequency `omega_d`.
///
/// `lambda` and `chi` are indexed by transition (i → i+1, length M−1), `s2`
/// and `s4` by level (length M).
#[derive(Debug, Clone, PartialEq)]
pub struct StarkCoeffs {
    pub omega_d: f64,
    pub lambda: Vec<f64>,
    pub chi: Vec<f64>,
    pub s2: Vec<f64>,
    pub s4: Vec<f64>,
}

/// Which Stark coefficients feed the qubit frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StarkVariant {
    /// Quadratic and quartic terms evaluated at the pump frequency.
    #[default]
    Full,
    /// Quartic term dropped.
    NoQuartic,
    /// Both terms evaluated as if the pump sat at the bare resonator frequency.
    ResonatorFrequency,
}

impl StarkCoeffs {
    pub fn levels(&self) -> usize {
        self.s2.len()
    }

    /// Λ_i, zero outside [0, M−2].
    pub fn lambda_at(&self, i: isize) -> f64 {
        at(&self.lambda, i)
    }

    /// X_i, zero outside [0, M−2].
    pub fn chi_at(&self, i: isize) -> f64 {
        at(&self.chi, i)
    }

    /// ξ_i = Λ_i α_i.
    pub fn xi(&self, i: usize, alpha: num_complex::Complex64) -> num_complex::Complex64 {
        alpha * self.lambda_at(i as isize)
    }

    /// The same coefficients with the quartic term removed.
    pub fn without_quartic(&self) -> Self {
        Self {
            s4: vec![0.0; self.s4.len()],
            ..self.clone()
        }
    }
}

fn at(v: &[f64], i: isize) -> f64 {
    if i < 0 {
        0.0
    } else {
        v.get(i as usize).copied().unwrap_or(0.0)
    }
}

/// Computes Λ, X, 𝕊 and 𝕂 for a drive at `omega_d` (MHz).
///
/// Fails when any transition lies within [`RESONANCE_GUARD_MHZ`] of the drive.
pub fn stark_coeffs(q: &QubitSpec, omega_d: f64) -> Result<StarkCoeffs> {
    let m = q.levels();
    let mut lambda = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let det = q.transition(i) - omega_d;
        if det.abs() < RESONANCE_GUARD_MHZ {
            return Err(Error::Resonance {
                transition: i,
                lower: i,
                upper: i + 1,
                drive_mhz: omega_d,
                detuning_mhz: det,
            });
        }
        lambda.push(-q.couplings()[i] / det);
    }
    let chi: Vec<f64> = lambda
        .iter()
        .zip(q.couplings())
        .map(|(l, g)| -g * l)
        .collect();
    let l = |i: isize| at(&lambda, i);
    let x = |i: isize| at(&chi, i);
    let s2: Vec<f64> = (0..m as isize).map(|i| -(x(i) - x(i - 1))).collect();
    let s4 = (0..m as isize)
        .map(|i| {
            let s = s2[i as usize];
            -4.0 * s * (l(i).powi(2) + l(i - 1).powi(2))
                - (3.0 * x(i + 1) * l(i).powi(2) - x(i) * l(i + 1).powi(2))
                + (3.0 * x(i - 2) * l(i - 1).powi(2) - x(i - 1) * l(i - 2).powi(2))
        })
        .collect();
    Ok(StarkCoeffs {
        omega_d,
        lambda,
        chi,
        s2,
        s4,
    })
}

/// Coefficients used for the qubit frequency under `variant`, for a pump at
/// `omega_p`.
pub fn stark_coeffs_variant(
    q: &QubitSpec,
    res: &ResonatorSpec,
    omega_p: f64,
    variant: StarkVariant,
) -> Result<StarkCoeffs> {
    match variant {
        StarkVariant::Full => stark_coeffs(q, omega_p),
        StarkVariant::NoQuartic => Ok(stark_coeffs(q, omega_p)?.without_quartic()),
        StarkVariant::ResonatorFrequency => stark_coeffs(q, res.omega_r),
    }
}

/// ω_i″ = ω_i + Σ_d 𝕊_i^d n_d + ¼ Σ_d 𝕂_i^d n_d², with n_d = |α_d|².
pub fn stark_shifted_freqs(q: &QubitSpec, drives: &[(&StarkCoeffs, f64)]) -> Vec<f64> {
    let mut w = q.omega().to_vec();
    for (c, n) in drives {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi += c.s2[i] * n + 0.25 * c.s4[i] * n * n;
        }
    }
    w
}

/// Qubit frequencies after the ac-Stark shift and the field-dependent Lamb
/// shift from the pulled resonator.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedSpectrum {
    pub omega2: Vec<f64>,
    pub omega3: Vec<f64>,
    pub lamb: Vec<f64>,
    pub pull: Vec<f64>,
    pub lambda_q: Vec<f64>,
    pub chi_q: Vec<f64>,
    pub omega_r_pulled: f64,
}

impl ShiftedSpectrum {
    /// ω_1‴ − ω_0‴.
    pub fn omega10(&self) -> f64 {
        self.omega3[1] - self.omega3[0]
    }
}

/// Builds ω‴ from ω″ and the resonator photon number `n` = |α|².
pub fn lamb_shift_chain(
    q: &QubitSpec,
    res: &ResonatorSpec,
    omega2: &[f64],
    n: f64,
) -> Result<ShiftedSpectrum> {
    let m = q.levels();
    let wr = res.pulled(n);
    let mut lambda_q = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let det = omega2[i + 1] - omega2[i] - wr;
        if det.abs() < RESONANCE_GUARD_MHZ {
            return Err(Error::DressedResonance {
                transition: i,
                detuning_mhz: det,
            });
        }
        lambda_q.push(-q.couplings()[i] / det);
    }
    let chi_q: Vec<f64> = lambda_q
        .iter()
        .zip(q.couplings())
        .map(|(l, g)| -g * l)
        .collect();
    let c = |i: isize| at(&chi_q, i);
    let lamb: Vec<f64> = (0..m as isize).map(|i| c(i - 1)).collect();
    let pull = (0..m as isize).map(|i| -(c(i) - c(i - 1))).collect();
    let omega3 = omega2.iter().zip(&lamb).map(|(w, l)| w + l).collect();
    Ok(ShiftedSpectrum {
        omega2: omega2.to_vec(),
        omega3,
        lamb,
        pull,
        lambda_q,
        chi_q,
        omega_r_pulled: wr,
    })
}

/// True when the resonator lies between the lowest and highest transition
/// frequencies. The reduced model drops two-photon terms that matter there.
pub fn is_straddling(q: &QubitSpec, res: &ResonatorSpec) -> bool {
    let t: Vec<f64> = (0..q.levels() - 1).map(|i| q.transition(i)).collect();
    let lo = t.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    res.omega_r > lo && res.omega_r < hi
}

/// Logs a warning for straddling parameters and returns whether it fired.
pub fn warn_if_straddling(q: &QubitSpec, res: &ResonatorSpec) -> bool {
    let s = is_straddling(q, res);
    if s {
        log::warn!(
            "resonator at {} MHz straddles the qubit transitions; two-photon terms are neglected",
            res.omega_r
        );
    }
    s
}
