use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::config::HilbertConfig;
use super::generator::Generator;
use super::integrator::{Dp45, Stats};
use crate::error::{Error, Result};

type C = Complex64;

/// Integrity measurements collected during a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Largest |tr ρ − 1| seen at window ends.
    pub trace_drift: f64,
    /// Largest |ρ − ρ†| entry seen at window ends, before symmetrization.
    pub hermiticity: f64,
    /// Smallest eigenvalue of ρ at window ends.
    pub min_eigenvalue: f64,
    /// Population of the two highest Fock states at the end.
    pub leakage: f64,
    /// Relative change of the last two window averages.
    pub steady_residual: f64,
    /// Number of accepted extrapolation jumps.
    pub extrapolations: usize,
    pub stats: Stats,
}

/// Result of [`evolve_to_steady`].
#[derive(Debug, Clone)]
pub struct SteadyResult {
    pub rho: Vec<C>,
    pub time_us: f64,
    /// Time average of the qubit level-1 population over the last window.
    pub p1: f64,
    /// Time average of ⟨a†a⟩ over the last window.
    pub photons: f64,
    pub windows: usize,
    pub window_us: f64,
    /// False when the horizon ran out first; the averages are then partial.
    pub steady: bool,
    pub diagnostics: Diagnostics,
}

/// Smallest eigenvalue of a Hermitian matrix stored row-major.
pub fn min_eigenvalue(rho: &[C], dim: usize) -> f64 {
    // Tiny entries (far Fock tails) underflow inside the eigen-solver's
    // rotations and can return -inf. Dropping entries below `floor` moves no
    // eigenvalue by more than dim·floor.
    let solve = |floor: f64| {
        let f2 = floor * floor;
        DMatrix::from_fn(dim, dim, |r, c| {
            let v = rho[r * dim + c];
            if v.norm_sqr() < f2 { C::new(0.0, 0.0) } else { v }
        })
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
    };
    let ev = solve(1e-30);
    if ev.is_finite() { ev } else { solve(1e-20) }
}

/// Replaces ρ by (ρ + ρ†)/2 and returns the largest |ρ − ρ†| entry.
fn symmetrize(rho: &mut [C], dim: usize) -> f64 {
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        let d = &mut rho[r * dim + r];
        dev = dev.max(4.0 * d.im * d.im);
        d.im = 0.0;
        for c in r + 1..dim {
            let a = rho[r * dim + c];
            let b = rho[c * dim + r].conj();
            dev = dev.max((a - b).norm_sqr());
            let m = 0.5 * (a + b);
            rho[r * dim + c] = m;
            rho[c * dim + r] = m.conj();
        }
    }
    dev.sqrt()
}

/// Reduced-rank extrapolation of a linearly converging sequence of states:
/// real weights γ with Σγ = 1 minimizing |Σ γ_j (x_{j+1} − x_j)|, giving
/// Σ γ_j x_{j+1}. Real weights keep trace and Hermiticity.
pub fn rre(states: &[Vec<C>]) -> Option<Vec<C>> {
    let k = states.len().checked_sub(1)?;
    if k == 0 {
        return None;
    }
    let d: Vec<Vec<C>> = states
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[C], b: &[C]| a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
    let mut g = DMatrix::<f64>::from_fn(k, k, |i, j| dot(&d[i], &d[j]));
    let scale = (0..k).map(|i| g[(i, i)]).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return None;
    }
    for i in 0..k {
        g[(i, i)] += 1e-13 * scale;
    }
    let y = g.lu().solve(&DVector::from_element(k, 1.0))?;
    let sum: f64 = y.iter().sum();
    if !sum.is_finite() || sum == 0.0 {
        return None;
    }
    let mut out = vec![C::new(0.0, 0.0); states[0].len()];
    for (j, yj) in y.iter().enumerate() {
        let w = yj / sum;
        for (o, v) in out.iter_mut().zip(&states[j + 1]) {
            *o += v * w;
        }
    }
    Some(out)
}

/// Plain evolution of ρ from `t0` to `t1`.
///
/// [`Generator::apply`] returns an exactly Hermitian matrix and every stage
/// combines with real weights, so ρ stays Hermitian to the last bit between
/// checks; the deviation is measured and removed at the end.
pub fn evolve(gen: &Generator, rho: &mut Vec<C>, t0: f64, t1: f64, cfg: &HilbertConfig) -> Result<Diagnostics> {
    let dim = gen.dim();
    let mut ig = Dp45::new(dim * dim, cfg.rtol, cfg.atol);
    ig.integrate(
        &mut |t, y: &[C], dy: &mut [C]| gen.apply(t, y, dy),
        rho,
        t0,
        t1,
        &mut |_, _, _, _: &mut [C]| {},
    )?;
    let herm = symmetrize(rho, dim);
    Ok(Diagnostics {
        trace_drift: (gen.trace(rho) - 1.0).abs(),
        hermiticity: herm,
        min_eigenvalue: min_eigenvalue(rho, dim),
        leakage: gen.leakage(rho),
        steady_residual: f64::NAN,
        extrapolations: 0,
        stats: ig.stats,
    })
}

/// Integrates until window-averaged ⟨Π_11⟩ and ⟨a†a⟩ change by less than
/// `steady_tol` between consecutive windows, or the horizon runs out.
///
/// The window map is the same linear map every window, so with
/// `cfg.extrapolation > 0` the states at window ends are extrapolated to
/// their fixed point once enough of them are collected. The steadiness test
/// restarts after each jump and is always passed by plain integration.
pub fn evolve_to_steady(gen: &Generator, rho0: Vec<C>, cfg: &HilbertConfig) -> Result<SteadyResult> {
    let dim = gen.dim();
    let window = match gen.beat_us() {
        Some(b) => (cfg.window_us / b).ceil().max(1.0) * b,
        None => cfg.window_us,
    };
    let mut rho = rho0;
    let mut ig = Dp45::new(dim * dim, cfg.rtol, cfg.atol);
    let mut diag = Diagnostics {
        min_eigenvalue: f64::INFINITY,
        ..Default::default()
    };
    let obs = |y: &[C]| (gen.population(y, 1), gen.photons(y));
    let mut prev: Option<(f64, f64)> = None;
    let mut t = 0.0;
    let mut windows = 0;
    let mut snapshots = vec![rho.clone()];
    loop {
        let mut acc = (0.0, 0.0);
        let mut last = obs(&rho);
        ig.integrate(
            &mut |t, y: &[C], dy: &mut [C]| gen.apply(t, y, dy),
            &mut rho,
            t,
            t + window,
            &mut |_, h, _, y: &mut [C]| {
                let now = obs(y);
                acc.0 += 0.5 * h * (last.0 + now.0);
                acc.1 += 0.5 * h * (last.1 + now.1);
                last = now;
            },
        )?;
        t += window;
        windows += 1;
        let avg = (acc.0 / window, acc.1 / window);
        let dev = symmetrize(&mut rho, dim);
        if dev > 0.0 {
            ig.invalidate();
        }
        diag.hermiticity = diag.hermiticity.max(dev);
        diag.trace_drift = diag.trace_drift.max((gen.trace(&rho) - 1.0).abs());
        let ev = min_eigenvalue(&rho, dim);
        diag.min_eigenvalue = diag.min_eigenvalue.min(ev);
        if ev < cfg.positivity_abort {
            return Err(Error::PositivityViolated {
                min_eigenvalue: ev,
                time_us: t,
            });
        }
        let mut steady = false;
        if let Some(p) = prev {
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(a.abs()).max(cfg.steady_floor);
            diag.steady_residual = rel(avg.0, p.0).max(rel(avg.1, p.1));
            steady = diag.steady_residual < cfg.steady_tol;
        }
        prev = Some(avg);
        if !steady && cfg.extrapolation > 0 {
            snapshots.push(rho.clone());
            if snapshots.len() > cfg.extrapolation {
                if let Some(mut cand) = rre(&snapshots) {
                    symmetrize(&mut cand, dim);
                    if min_eigenvalue(&cand, dim) > -1e-9 {
                        rho = cand;
                        ig.invalidate();
                        prev = None;
                        diag.extrapolations += 1;
                    }
                }
                snapshots.clear();
                snapshots.push(rho.clone());
            }
        }
        if steady || t + window > cfg.horizon_us + 1e-12 {
            if !steady {
                log::warn!("horizon of {} us reached before steady state", cfg.horizon_us);
            }
            diag.leakage = gen.leakage(&rho);
            diag.stats = ig.stats;
            return Ok(SteadyResult {
                rho,
                time_us: t,
                p1: avg.0,
                photons: avg.1,
                windows,
                window_us: window,
                steady,
                diagnostics: diag,
            });
        }
    }
}
