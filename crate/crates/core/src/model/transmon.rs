//! Cooper-pair-box spectrum in the charge basis.
//!
//! H = 4 E_C (n − n_g)² − E_J cos φ with n ∈ [−c, c]. The default offset
//! n_g = 1/2 is a charge sweet spot; any other offset can be passed through
//! [`TransmonParams::offset_charge`].

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::model::QubitSpec;

/// Relative shift tolerated between cutoffs `c` and `c + 5`.
const CONVERGENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonParams {
    /// Josephson energy, MHz.
    pub ej: f64,
    /// Charging energy, MHz.
    pub ec: f64,
    pub levels: usize,
    pub charge_cutoff: usize,
    /// Coupling of the 0↔1 transition, MHz.
    pub g0: f64,
    pub offset_charge: f64,
    pub gamma: f64,
    pub gamma_phi: f64,
}

impl TransmonParams {
    pub fn new(ej: f64, ec: f64, levels: usize, charge_cutoff: usize, g0: f64) -> Self {
        Self {
            ej,
            ec,
            levels,
            charge_cutoff,
            g0,
            offset_charge: 0.5,
            gamma: 0.0,
            gamma_phi: 0.0,
        }
    }
}

struct Spectrum {
    energies: Vec<f64>,
    charge: DMatrix<f64>,
    cos_phi: Vec<f64>,
}

fn diagonalize(p: &TransmonParams, cutoff: usize) -> Spectrum {
    let dim = 2 * cutoff + 1;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..dim {
        let n = k as f64 - cutoff as f64 - p.offset_charge;
        h[(k, k)] = 4.0 * p.ec * n * n;
        if k + 1 < dim {
            h[(k, k + 1)] = -0.5 * p.ej;
            h[(k + 1, k)] = -0.5 * p.ej;
        }
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let m = p.levels.min(dim);
    let vecs = DMatrix::from_fn(dim, m, |r, c| eig.eigenvectors[(r, order[c])]);
    let energies = order[..m].iter().map(|&k| eig.eigenvalues[k]).collect();
    let nop = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            r as f64 - cutoff as f64
        } else {
            0.0
        }
    });
    let charge = vecs.transpose() * nop * &vecs;
    // ⟨i|cos φ|i⟩ from the nearest-neighbour hopping in charge space.
    let cos_phi = (0..m)
        .map(|c| {
            (0..dim - 1)
                .map(|r| vecs[(r, c)] * vecs[(r + 1, c)])
                .sum::<f64>()
        })
        .collect();
    Spectrum {
        energies,
        charge,
        cos_phi,
    }
}

/// Diagonalizes the charge Hamiltonian and returns the lowest `levels`
/// levels as a [`QubitSpec`].
///
/// Couplings follow g_i = g0 ⟨i|n|i+1⟩/⟨0|n|1⟩. Dispersions are the
/// normalised E_J sensitivities ∂E_i/∂E_J = −⟨i|cos φ|i⟩, so that ε_0 = 0 and
/// ε_1 = 1.
pub fn build_transmon(p: &TransmonParams) -> Result<QubitSpec> {
    if !(p.ej > 0.0 && p.ec > 0.0 && p.ej / p.ec > 1.0) {
        return Err(invalid("ej/ec", "requires EJ, EC > 0 and EJ/EC > 1"));
    }
    if p.charge_cutoff < 10 {
        return Err(invalid("charge_cutoff", "must be at least 10"));
    }
    if p.levels < 2 || p.levels > 2 * p.charge_cutoff {
        return Err(invalid("levels", "must lie in [2, 2·cutoff]"));
    }
    let s = diagonalize(p, p.charge_cutoff);
    let wider = diagonalize(p, p.charge_cutoff + 5);
    let scale = (s.energies[p.levels - 1] - s.energies[0]).abs().max(p.ec);
    let shift = s
        .energies
        .iter()
        .zip(&wider.energies)
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max);
    if shift > CONVERGENCE_TOL {
        return Err(Error::NotConverged {
            cutoff: p.charge_cutoff,
            shift,
        });
    }
    let e0 = s.energies[0];
    let omega: Vec<f64> = s.energies.iter().map(|e| e - e0).collect();
    let n01 = s.charge[(0, 1)].abs();
    let g = (0..p.levels - 1)
        .map(|i| p.g0 * s.charge[(i, i + 1)].abs() / n01)
        .collect();
    let de: Vec<f64> = s.cos_phi.iter().map(|c| -c).collect();
    let dispersion = (0..p.levels)
        .map(|i| match i {
            0 => 0.0,
            1 => 1.0,
            _ => (de[i] - de[0]) / (de[1] - de[0]),
        })
        .collect();
    QubitSpec::new(omega, g, dispersion, p.gamma, p.gamma_phi)
}

/// Finds E_J and E_C reproducing the two lowest transition frequencies, by
/// Newton iteration from the asymptotic transmon formulas.
pub fn fit_transmon(omega10: f64, omega21: f64, template: &TransmonParams) -> Result<TransmonParams> {
    if !(omega21 < omega10 && omega21 > 0.0) {
        return Err(invalid("omega21", "a transmon needs 0 < ω21 < ω10"));
    }
    let ec0 = omega10 - omega21;
    let mut x = [(omega10 + ec0).powi(2) / (8.0 * ec0), ec0];
    let eval = |x: [f64; 2]| -> Result<[f64; 2]> {
        let p = TransmonParams {
            ej: x[0],
            ec: x[1],
            levels: template.levels.max(3),
            ..*template
        };
        let q = build_transmon(&p)?;
        Ok([q.transition(0) - omega10, q.transition(1) - omega21])
    };
    for _ in 0..50 {
        let f = eval(x)?;
        if f[0].abs().max(f[1].abs()) < 1e-9 * omega10 {
            return Ok(TransmonParams {
                ej: x[0],
                ec: x[1],
                ..*template
            });
        }
        let mut j = [[0.0; 2]; 2];
        for c in 0..2 {
            let h = 1e-6 * x[c];
            let mut xp = x;
            xp[c] += h;
            let fp = eval(xp)?;
            for r in 0..2 {
                j[r][c] = (fp[r] - f[r]) / h;
            }
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let dx0 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dx1 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        x = [x[0] - dx0, x[1] - dx1];
    }
    Err(Error::Numerical("transmon fit did not converge".into()))
}
