use num_complex::Complex64;

use super::config::HilbertConfig;
use super::evolve::{evolve_to_steady, Diagnostics, SteadyResult};
use super::generator::Generator;
use crate::error::{Error, Result};
use crate::fit::{fit_lorentzian, LorentzianFit};
use crate::model::{DriveSpec, QubitSpec, ResonatorSpec};

type C = Complex64;

/// One spectroscopy frequency of a brute-force column.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePoint {
    pub omega_s: f64,
    pub p1: f64,
    pub photons: f64,
    pub steady: bool,
    pub time_us: f64,
    /// Fock cutoff actually used, after any escalation.
    pub fock: usize,
    pub diagnostics: Diagnostics,
}

/// P1 at one point recomputed with twice the Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCheck {
    pub omega_s: f64,
    pub fock: usize,
    pub p1: f64,
    pub p1_doubled: f64,
}

impl FockCheck {
    pub fn relative_change(&self) -> f64 {
        (self.p1_doubled - self.p1).abs() / self.p1.abs().max(1e-12)
    }
}

/// A density matrix together with the truncation it lives in.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub rho: Vec<C>,
    pub levels: usize,
    pub fock: usize,
}

#[derive(Debug, Clone)]
pub struct OracleColumn {
    pub eps_p: C,
    pub points: Vec<OraclePoint>,
    pub fit: LorentzianFit,
    pub fock_check: Option<FockCheck>,
    /// State at the last frequency, usable as a warm start.
    pub last: Option<OracleState>,
}

impl OracleColumn {
    pub fn p1(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p1).collect()
    }
}

fn run(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    spec: &DriveSpec,
    cfg: &HilbertConfig,
    warm: Option<&OracleState>,
) -> Result<(SteadyResult, HilbertConfig)> {
    let mut cfg = *cfg;
    let mut warm = warm;
    let mut escalated = false;
    loop {
        let gen = Generator::new(q, res, pump, Some(spec), &cfg)?;
        let rho0 = match &warm {
            Some(w) => gen.embed(&w.rho, w.levels, w.fock),
            None => gen.ground(),
        };
        let out = evolve_to_steady(&gen, rho0, &cfg)?;
        let leak = out.diagnostics.leakage;
        if leak <= cfg.leakage_tol {
            return Ok((out, cfg));
        }
        if !cfg.escalate || escalated {
            return Err(Error::Leakage {
                fock: cfg.fock,
                leakage: leak,
            });
        }
        log::warn!("Fock leakage {leak:.2e} at N = {}, doubling the cutoff", cfg.fock);
        escalated = true;
        warm = None;
        cfg.fock *= 2;
    }
}

/// Steady-state P1 of a single (pump, spectroscopy) pair, starting from the
/// ground state.
pub fn oracle_point(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    spec: &DriveSpec,
    cfg: &HilbertConfig,
) -> Result<(OraclePoint, Vec<C>)> {
    let (out, used) = run(q, res, pump, spec, cfg, None)?;
    Ok((point(spec.omega, &out, used.fock), out.rho))
}

fn point(omega_s: f64, out: &SteadyResult, fock: usize) -> OraclePoint {
    OraclePoint {
        omega_s,
        p1: out.p1,
        photons: out.photons,
        steady: out.steady,
        time_us: out.time_us,
        fock,
        diagnostics: out.diagnostics,
    }
}

/// Spectroscopy sweep at fixed pump. Each point starts from the previous
/// point's steady state, the first one from `warm` or the ground state.
/// With `check_fock`, the point of largest P1 is recomputed at twice the
/// cutoff.
#[allow(clippy::too_many_arguments)]
pub fn oracle_column(
    q: &QubitSpec,
    res: &ResonatorSpec,
    pump: &DriveSpec,
    eps_s: f64,
    omega_s: &[f64],
    cfg: &HilbertConfig,
    check_fock: bool,
    warm: Option<&OracleState>,
) -> Result<OracleColumn> {
    let mut points = Vec::with_capacity(omega_s.len());
    let mut states: Vec<OracleState> = Vec::new();
    for &ws in omega_s {
        let spec = DriveSpec::spectroscopy(eps_s, ws);
        let start = states.last().or(warm);
        let (out, used) = run(q, res, pump, &spec, cfg, start)?;
        log::debug!(
            "oracle ws={ws:.4} p1={:.6} t={:.2}us evals={}",
            out.p1,
            out.time_us,
            out.diagnostics.stats.evaluations
        );
        points.push(point(ws, &out, used.fock));
        states.push(OracleState {
            rho: out.rho,
            levels: used.levels,
            fock: used.fock,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.omega_s).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.p1).collect();
    let fit = fit_lorentzian(&xs, &ys);
    let fock_check = if check_fock && !points.is_empty() {
        let (idx, _) = ys
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let base = &points[idx];
        let spec = DriveSpec::spectroscopy(eps_s, base.omega_s);
        let big = HilbertConfig {
            fock: base.fock * 2,
            escalate: false,
            ..*cfg
        };
        let (out, _) = run(q, res, pump, &spec, &big, Some(&states[idx]))?;
        Some(FockCheck {
            omega_s: base.omega_s,
            fock: base.fock,
            p1: base.p1,
            p1_doubled: out.p1,
        })
    } else {
        None
    };
    Ok(OracleColumn {
        eps_p: pump.epsilon,
        points,
        fit,
        fock_check,
        last: states.pop(),
    })
}

/// Brute-force spectrum over pump amplitudes at one pump frequency.
#[derive(Debug, Clone)]
pub struct OracleGrid {
    pub omega_p: f64,
    pub eps_s: f64,
    pub columns: Vec<OracleColumn>,
}

/// Oracle columns for every `eps_p`, each over its own ω_s axis from
/// `axis(eps_p)`. Columns are chained: each starts from the previous
/// column's final state, and every other column is swept downwards so the
/// hand-over happens between neighbouring frequencies.
#[allow(clippy::too_many_arguments)]
pub fn oracle_spectrum(
    q: &QubitSpec,
    res: &ResonatorSpec,
    omega_p: f64,
    eps_p: &[f64],
    eps_s: f64,
    mut axis: impl FnMut(f64) -> Result<Vec<f64>>,
    cfg: &HilbertConfig,
    check_fock: bool,
) -> Result<OracleGrid> {
    if eps_p.is_empty() {
        return Err(crate::error::invalid("eps_p", "empty axis"));
    }
    let mut columns: Vec<OracleColumn> = Vec::with_capacity(eps_p.len());
    for (k, &e) in eps_p.iter().enumerate() {
        let mut ws = axis(e)?;
        if ws.is_empty() {
            return Err(crate::error::invalid("omega_s", "empty axis"));
        }
        let down = k % 2 == 1;
        if down {
            ws.reverse();
        }
        let warm = columns.last().and_then(|c| c.last.as_ref());
        let mut col = oracle_column(q, res, &DriveSpec::pump(e, omega_p), eps_s, &ws, cfg, check_fock, warm)?;
        if down {
            col.points.reverse();
        }
        columns.push(col);
    }
    Ok(OracleGrid {
        omega_p,
        eps_s,
        columns,
    })
}

/// Five probe frequencies at `center` + {−2, −1, 0, 1, 2}·`hwhm`, enough to
/// pin a Lorentzian whose shape is roughly known in advance.
pub fn probe_axis(center: f64, hwhm: f64) -> Vec<f64> {
    (-2..=2).map(|k| center + k as f64 * hwhm).collect()
}
