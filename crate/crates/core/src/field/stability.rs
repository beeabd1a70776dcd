//! Bistability windows of the driven Kerr resonator over (Ω, ε_p).

use num_complex::Complex64;

use super::detuning::{pump_for_ratio, DetuningReference};
use super::pump::PumpEquation;
use crate::error::{invalid, Result};
use crate::model::{stark_coeffs, QubitSpec, ResonatorSpec};
use crate::units::OMEGA_CRITICAL;

/// Which pump equation a diagram is drawn for.
#[derive(Debug, Clone, Copy)]
pub struct StabilityModel<'a> {
    pub res: &'a ResonatorSpec,
    /// Qubit and the state whose pull enters the equation; `None` for the
    /// bare resonator.
    pub qubit: Option<(&'a QubitSpec, usize)>,
    pub reference: DetuningReference,
}

impl<'a> StabilityModel<'a> {
    pub fn bare(res: &'a ResonatorSpec) -> Self {
        Self {
            res,
            qubit: None,
            reference: DetuningReference::Bare,
        }
    }

    pub fn pump_frequency(&self, ratio: f64) -> Result<f64> {
        match (self.qubit, self.reference) {
            (Some((q, _)), r) => pump_for_ratio(q, self.res, ratio, r),
            (None, DetuningReference::Bare) => {
                Ok(self.res.omega_r - ratio * OMEGA_CRITICAL * self.res.kappa / 2.0)
            }
            (None, DetuningReference::Pulled) => {
                Err(invalid("reference", "a pulled reference needs a qubit"))
            }
        }
    }

    /// Pump frequency and equation at Ω/Ω_C = `ratio`.
    pub fn equation(&self, ratio: f64) -> Result<(f64, PumpEquation)> {
        let wp = self.pump_frequency(ratio)?;
        let eq = match self.qubit {
            Some((q, state)) => PumpEquation::for_state(self.res, &stark_coeffs(q, wp)?, state),
            None => PumpEquation::bare(self.res, wp),
        };
        Ok((wp, eq))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    MonoL,
    MonoH,
    Bistable,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::MonoL => "mono-L",
            Region::MonoH => "mono-H",
            Region::Bistable => "bistable",
        }
    }
}

/// Drive amplitudes bounding the bistable window at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub ratio: f64,
    pub omega_p: f64,
    /// Sweep-down switching amplitude.
    pub eps_low: f64,
    /// Sweep-up switching amplitude.
    pub eps_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityDiagram {
    pub ratios: Vec<f64>,
    pub eps: Vec<f64>,
    /// `regions[i][j]` at `ratios[i]`, `eps[j]`.
    pub regions: Vec<Vec<Region>>,
    /// One entry per ratio with a bistable window.
    pub thresholds: Vec<Thresholds>,
}

/// (ε_low, ε_high) from the first turning-point pair of n|A(n)|², if any.
pub fn window(eq: &PumpEquation) -> Option<(f64, f64)> {
    let t = eq.turning_points();
    if t.len() < 2 {
        return None;
    }
    let hi = eq.response(t[0]).0.sqrt();
    let lo = eq.response(t[1]).0.sqrt();
    Some((lo, hi))
}

fn region(eps: f64, w: Option<(f64, f64)>) -> Region {
    match w {
        None => Region::MonoL,
        Some((lo, _)) if eps < lo => Region::MonoL,
        Some((_, hi)) if eps > hi => Region::MonoH,
        Some(_) => Region::Bistable,
    }
}

pub fn stability_diagram(model: &StabilityModel, ratios: &[f64], eps: &[f64]) -> Result<StabilityDiagram> {
    if ratios.is_empty() || eps.is_empty() {
        return Err(invalid("grid", "empty axis"));
    }
    let mut regions = Vec::with_capacity(ratios.len());
    let mut thresholds = Vec::new();
    for &ratio in ratios {
        let (wp, eq) = model.equation(ratio)?;
        let w = window(&eq);
        if let Some((lo, hi)) = w {
            thresholds.push(Thresholds {
                ratio,
                omega_p: wp,
                eps_low: lo,
                eps_high: hi,
            });
        }
        regions.push(eps.iter().map(|&e| region(e, w)).collect());
    }
    Ok(StabilityDiagram {
        ratios: ratios.to_vec(),
        eps: eps.to_vec(),
        regions,
        thresholds,
    })
}

/// Amplitude in [a, b] where the number of roots changes, by bisection to
/// `rel_tol`. The root counts at `a` and `b` must differ.
pub fn bisect_threshold(eq: &PumpEquation, mut a: f64, mut b: f64, rel_tol: f64) -> Result<f64> {
    let count = |e: f64| eq.roots(Complex64::new(e, 0.0)).len();
    let ca = count(a);
    if ca == count(b) {
        return Err(invalid("bracket", "root count is equal at both ends"));
    }
    while (b - a).abs() > rel_tol * b.abs().max(a.abs()) {
        let m = 0.5 * (a + b);
        if count(m) == ca {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest Ω/Ω_C in [lo, hi] at which a bistable window opens, by bisection
/// to 1e-12. `lo` must be mono-valued and `hi` bistable.
pub fn critical_ratio(model: &StabilityModel, mut lo: f64, mut hi: f64) -> Result<f64> {
    let bist = |r: f64| -> Result<bool> { Ok(model.equation(r)?.1.has_bistability()) };
    if bist(lo)? || !bist(hi)? {
        return Err(invalid("bracket", "critical detuning is not bracketed"));
    }
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let m = 0.5 * (lo + hi);
        if bist(m)? {
            hi = m;
        } else {
            lo = m;
        }
    }
    Ok(0.5 * (lo + hi))
}
