use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    linear_response_fields, solve_pointer_with, Branch, BranchPolicy, LinearResponseForm, PointerField,
    PointerSolution,
};
use crate::model::stark::{stark_coeffs_variant, StarkVariant};
use crate::model::{lamb_shift_chain, stark_coeffs, stark_shifted_freqs, Drives, QubitSpec, ResonatorSpec, ShiftedSpectrum};

/// Dressed-dephasing treatment of the qubit relaxation and heating rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DressedDephasing {
    #[default]
    Off,
    White,
}

/// Pointer fields used by the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldModel {
    /// Full nonlinear solve per qubit state.
    #[default]
    Nonlinear,
    /// First-order expansion around the qubit-independent field.
    Linear(LinearResponseForm),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedOptions {
    pub dressed_dephasing: DressedDephasing,
    pub purcell: bool,
    pub variant: StarkVariant,
    pub fields: FieldModel,
    pub policy: BranchPolicy,
}

impl Default for ReducedOptions {
    fn default() -> Self {
        Self {
            dressed_dephasing: DressedDephasing::Off,
            purcell: true,
            variant: StarkVariant::Full,
            fields: FieldModel::Nonlinear,
            policy: BranchPolicy::SweepUp,
        }
    }
}

/// Rates and frequency of the reduced two-level qubit at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRates {
    pub kappa2: f64,
    pub gamma_down: f64,
    pub gamma_up: f64,
    pub gamma_dd: f64,
    pub gamma_phi3: f64,
    pub gamma_phim: f64,
    pub gamma2: f64,
    /// |α_1 − α_0|.
    pub d: f64,
    pub purcell: f64,
    pub omega10_3: f64,
    /// κ D², the rate at which the pump's output field resolves the qubit.
    pub measurement_rate: f64,
    /// Ground-state photon number.
    pub n0: f64,
    pub spectrum: ShiftedSpectrum,
}

impl ReducedRates {
    /// Set when Γ_φm > κ/2, i.e. D ≳ 1, beyond the small-distinguishability
    /// approximation.
    pub fn breakdown(&self, kappa: f64) -> bool {
        self.gamma_phim > 0.5 * kappa
    }

    /// κD² / (2Γ_φm); 0 when D = 0.
    pub fn quantum_limit_ratio(&self) -> f64 {
        quantum_limit_ratio(self)
    }
}

/// κD² / (2Γ_φm); 0 when D = 0.
pub fn quantum_limit_ratio(r: &ReducedRates) -> f64 {
    if r.measurement_rate == 0.0 {
        0.0
    } else {
        r.measurement_rate / (2.0 * r.gamma_phim)
    }
}

/// Pointer fields for `drives` under the field model of `opts`.
pub fn pointer_fields(
    q: &QubitSpec,
    res: &ResonatorSpec,
    drives: &Drives,
    opts: &ReducedOptions,
) -> Result<PointerSolution> {
    let coeffs = stark_coeffs(q, drives.pump.omega)?;
    match opts.fields {
        FieldModel::Nonlinear => solve_pointer_with(res, coeffs, drives, opts.policy),
        FieldModel::Linear(form) => {
            let e = linear_response_fields(q, res, &drives.pump, opts.policy, form)?;
            let alpha_s = match drives.spectroscopy {
                Some(s) => crate::field::solve_pointer_spectroscopy(res, e.alpha_bar, s.epsilon, s.omega),
                None => Complex64::new(0.0, 0.0),
            };
            let states = (0..q.levels())
                .map(|i| {
                    let a = e.linear_field(i);
                    PointerField {
                        alpha_p: a,
                        alpha_s,
                        n: a.norm_sqr(),
                        branch: Branch::Low,
                        residual: 0.0,
                        roots: vec![e.alpha_bar.norm_sqr()],
                    }
                })
                .collect();
            Ok(PointerSolution {
                eps_p: drives.pump.epsilon,
                omega_p: drives.pump.omega,
                coeffs,
                states,
            })
        }
    }
}

pub fn reduced_rates(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pointer: &PointerSolution,
    opts: &ReducedOptions,
) -> Result<ReducedRates> {
    let a0 = pointer.state(0)?.alpha_p;
    let a1 = pointer.state(1)?.alpha_p;
    let n0 = a0.norm_sqr();
    let c = &pointer.coeffs;

    let freq = stark_coeffs_variant(q, res, pointer.omega_p, opts.variant)?;
    let omega2 = stark_shifted_freqs(q, &[(&freq, n0)]);
    let spectrum = lamb_shift_chain(q, res, &omega2, n0)?;

    let kappa2 = res.kappa + 4.0 * res.kappa_nl * n0;
    let d = (a1 - a0).norm();
    let gamma_dd = match opts.dressed_dephasing {
        DressedDephasing::Off => 0.0,
        DressedDephasing::White => {
            let de = q.dispersion()[1] - q.dispersion()[0];
            (2.0 * q.gamma_phi * de * de + res.kappa * d * d) * c.lambda[0].powi(2) * n0
        }
    };
    let purcell = if opts.purcell {
        spectrum.lambda_q[0].powi(2) * kappa2
    } else {
        0.0
    };
    let gamma_down = q.relaxation(1) + gamma_dd + purcell;
    let gamma_up = gamma_dd;
    let g0 = q.couplings()[0];
    let emitted = (a0 * (2.0 * c.chi[0]) - a1 * c.chi_at(1)).norm_sqr();
    let gamma_phim = 0.5 * res.kappa * d * d
        + 0.5 * res.kappa_nl * (a1 * a1 - a0 * a0).norm_sqr()
        + q.gamma * emitted / (2.0 * g0 * g0);
    let gamma_phi3 = q.gamma_phi + gamma_phim;
    let gamma2 = gamma_phi3 + 0.5 * (gamma_down + gamma_up);
    let r = ReducedRates {
        kappa2,
        gamma_down,
        gamma_up,
        gamma_dd,
        gamma_phi3,
        gamma_phim,
        gamma2,
        d,
        purcell,
        omega10_3: spectrum.omega10(),
        measurement_rate: res.kappa * d * d,
        n0,
        spectrum,
    };
    if [r.kappa2, r.gamma_down, r.gamma_up, r.gamma_phim, r.gamma2]
        .iter()
        .any(|x| !(x.is_finite() && *x >= 0.0))
    {
        return Err(Error::Numerical(format!("invalid reduced rates {r:?}")));
    }
    Ok(r)
}
