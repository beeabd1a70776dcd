//! Qubit-state-conditioned pointer fields for the pump and the spectroscopy
//! tone.

use num_complex::Complex64;

use super::pump::{PumpEquation, PumpRoot};
use crate::error::{Error, Result};
use crate::model::{stark_coeffs, DriveSpec, Drives, QubitSpec, ResonatorSpec, StarkCoeffs};

/// How to pick among several stable roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPolicy {
    /// Amplitude ramped up from zero: the lowest root.
    #[default]
    SweepUp,
    /// Amplitude ramped down from above the window: the highest root.
    SweepDown,
    /// Refuse to choose.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Low,
    High,
    Unstable,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Low => "L",
            Branch::High => "H",
            Branch::Unstable => "unstable",
        }
    }
}

/// Pump and spectroscopy fields for one qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerField {
    pub alpha_p: Complex64,
    pub alpha_s: Complex64,
    pub n: f64,
    pub branch: Branch,
    pub residual: f64,
    /// Photon numbers of every non-negative root, ascending.
    pub roots: Vec<f64>,
}

impl PointerField {
    pub fn bistable(&self) -> bool {
        self.roots.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointerSolution {
    pub eps_p: Complex64,
    pub omega_p: f64,
    pub coeffs: StarkCoeffs,
    pub states: Vec<PointerField>,
}

impl PointerSolution {
    /// D = |α_1 − α_0|.
    pub fn distinguishability(&self) -> f64 {
        (self.states[1].alpha_p - self.states[0].alpha_p).norm()
    }

    pub fn state(&self, i: usize) -> Result<&PointerField> {
        self.states.get(i).ok_or(Error::UnsolvedPointer { state: i })
    }
}

/// Picks a root of `eq` at drive `eps` under `policy` and labels it.
pub fn select_branch(
    eq: &PumpEquation,
    eps: Complex64,
    policy: BranchPolicy,
) -> Result<(PumpRoot, Branch, Vec<f64>)> {
    let roots = eq.roots(eps);
    let ns: Vec<f64> = roots.iter().map(|r| r.n).collect();
    let stable: Vec<&PumpRoot> = roots.iter().filter(|r| r.stable).collect();
    let pick = match policy {
        _ if stable.is_empty() => None,
        BranchPolicy::SweepUp => stable.first(),
        BranchPolicy::SweepDown => stable.last(),
        BranchPolicy::Strict if stable.len() > 1 => {
            return Err(Error::AmbiguousBranch {
                roots: stable.iter().map(|r| r.n).collect(),
            })
        }
        BranchPolicy::Strict => stable.first(),
    };
    let root = **pick.ok_or(Error::NoPhysicalRoot {
        eps_mhz: eps.norm(),
    })?;
    let bound = eq.residual_bound(eps);
    if !(root.residual <= bound) {
        return Err(Error::Residual {
            residual: root.residual,
            bound,
        });
    }
    let branch = if stable.len() > 1 {
        if root.n == stable[0].n {
            Branch::Low
        } else {
            Branch::High
        }
    } else {
        match eq.turning_points().first() {
            Some(&t) if root.n > t => Branch::High,
            _ => Branch::Low,
        }
    };
    Ok((root, branch, ns))
}

/// Pump field of qubit state `state`.
pub fn solve_pointer_pump(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    state: usize,
    policy: BranchPolicy,
) -> Result<PointerField> {
    let coeffs = stark_coeffs(q, pump.omega)?;
    pump_field(res, &coeffs, pump.epsilon, state, policy)
}

fn pump_field(
    res: &ResonatorSpec,
    coeffs: &StarkCoeffs,
    eps: Complex64,
    state: usize,
    policy: BranchPolicy,
) -> Result<PointerField> {
    let eq = PumpEquation::for_state(res, coeffs, state);
    let (root, branch, roots) = select_branch(&eq, eps, policy)?;
    Ok(PointerField {
        alpha_p: root.alpha,
        alpha_s: Complex64::new(0.0, 0.0),
        n: root.n,
        branch,
        residual: root.residual,
        roots,
    })
}

/// Spectroscopy field, linear in ε_s, seen through the resonator dressed by
/// the ground-state pump field `alpha_p`.
pub fn solve_pointer_spectroscopy(
    res: &ResonatorSpec,
    alpha_p: Complex64,
    eps_s: Complex64,
    omega_s: f64,
) -> Complex64 {
    let n = alpha_p.norm_sqr();
    let den = Complex64::new(res.omega_r - omega_s, -0.5 * res.kappa)
        + Complex64::new(res.kerr, -res.kappa_nl) * n
        + res.kerr3 * n * n;
    let alpha_s = -eps_s / den;
    if alpha_p.norm() > 0.0 && alpha_s.norm() > 0.3 * alpha_p.norm() {
        log::warn!(
            "spectroscopy field |α_s| = {:.3} is not small against |α_p| = {:.3}",
            alpha_s.norm(),
            alpha_p.norm()
        );
    }
    alpha_s
}

/// Pump fields for every qubit state, plus the spectroscopy field if a
/// spectroscopy drive is present.
pub fn solve_pointer(
    q: &QubitSpec,
    res: &ResonatorSpec,
    drives: &Drives,
    policy: BranchPolicy,
) -> Result<PointerSolution> {
    let coeffs = stark_coeffs(q, drives.pump.omega)?;
    solve_pointer_with(res, coeffs, drives, policy)
}

/// As [`solve_pointer`] with precomputed pump coefficients.
pub fn solve_pointer_with(
    res: &ResonatorSpec,
    coeffs: StarkCoeffs,
    drives: &Drives,
    policy: BranchPolicy,
) -> Result<PointerSolution> {
    let eps = drives.pump.epsilon;
    let mut states = (0..coeffs.levels())
        .map(|i| pump_field(res, &coeffs, eps, i, policy))
        .collect::<Result<Vec<_>>>()?;
    if let Some(s) = drives.spectroscopy {
        let a = solve_pointer_spectroscopy(res, states[0].alpha_p, s.epsilon, s.omega);
        for st in &mut states {
            st.alpha_s = a;
        }
    }
    Ok(PointerSolution {
        eps_p: eps,
        omega_p: drives.pump.omega,
        coeffs,
        states,
    })
}
