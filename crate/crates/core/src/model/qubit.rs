use crate::error::{invalid, Result};

/// A multi-level qubit with nearest-neighbour dipole couplings to the resonator.
///
/// Level frequencies, couplings and rates are in MHz (ν = ω/2π).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitSpec {
    omega: Vec<f64>,
    g: Vec<f64>,
    dispersion: Vec<f64>,
    pub gamma: f64,
    pub gamma_phi: f64,
}

impl QubitSpec {
    /// `omega` holds the M level frequencies, `g` the M−1 couplings between
    /// neighbouring levels and `dispersion` the M dimensionless dispersions
    /// ε_i (ε_0 = 0 and ε_1 = 1 are required).
    pub fn new(
        omega: Vec<f64>,
        g: Vec<f64>,
        dispersion: Vec<f64>,
        gamma: f64,
        gamma_phi: f64,
    ) -> Result<Self> {
        let m = omega.len();
        if m < 2 {
            return Err(invalid("omega", "a qubit needs at least two levels"));
        }
        if g.len() != m - 1 {
            return Err(invalid("g", format!("expected {} couplings, got {}", m - 1, g.len())));
        }
        if dispersion.len() != m {
            return Err(invalid(
                "dispersion",
                format!("expected {m} dispersions, got {}", dispersion.len()),
            ));
        }
        if dispersion[0] != 0.0 || dispersion[1] != 1.0 {
            return Err(invalid("dispersion", "epsilon_0 must be 0 and epsilon_1 must be 1"));
        }
        if omega.iter().chain(&g).chain(&dispersion).any(|x| !x.is_finite()) {
            return Err(invalid("qubit", "non-finite entry"));
        }
        if g[0] == 0.0 {
            return Err(invalid("g", "g_0 sets the relaxation scale and must be non-zero"));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", "must be finite and >= 0"));
        }
        if !(gamma_phi >= 0.0 && gamma_phi.is_finite()) {
            return Err(invalid("gamma_phi", "must be finite and >= 0"));
        }
        Ok(Self {
            omega,
            g,
            dispersion,
            gamma,
            gamma_phi,
        })
    }

    /// Builds a qubit from its transition frequencies ω_{i+1}−ω_i, with ω_0 = 0
    /// and harmonic dispersions ε_i = i.
    pub fn from_transitions(transitions: &[f64], g: &[f64], gamma: f64, gamma_phi: f64) -> Result<Self> {
        let mut omega = vec![0.0];
        for t in transitions {
            omega.push(omega.last().unwrap() + t);
        }
        let dispersion = (0..omega.len()).map(|i| i as f64).collect();
        Self::new(omega, g.to_vec(), dispersion, gamma, gamma_phi)
    }

    /// Keeps only the lowest `levels` levels.
    pub fn truncated(&self, levels: usize) -> Result<Self> {
        if levels < 2 || levels > self.levels() {
            return Err(invalid("levels", format!("cannot truncate {} levels to {levels}", self.levels())));
        }
        Self::new(
            self.omega[..levels].to_vec(),
            self.g[..levels - 1].to_vec(),
            self.dispersion[..levels].to_vec(),
            self.gamma,
            self.gamma_phi,
        )
    }

    pub fn levels(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn couplings(&self) -> &[f64] {
        &self.g
    }

    pub fn dispersion(&self) -> &[f64] {
        &self.dispersion
    }

    /// g_i, zero outside [0, M−2].
    pub fn g(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.g.get(i as usize).copied().unwrap_or(0.0)
        }
    }

    /// ω_{i+1} − ω_i.
    pub fn transition(&self, i: usize) -> f64 {
        self.omega[i + 1] - self.omega[i]
    }

    pub fn omega10(&self) -> f64 {
        self.transition(0)
    }

    /// Relaxation rate of the i → i−1 channel, γ (g_{i−1}/g_0)².
    pub fn relaxation(&self, upper: usize) -> f64 {
        if upper == 0 {
            return 0.0;
        }
        let r = self.g[upper - 1] / self.g[0];
        self.gamma * r * r
    }

    pub fn with_couplings(&self, g: Vec<f64>) -> Result<Self> {
        Self::new(self.omega.clone(), g, self.dispersion.clone(), self.gamma, self.gamma_phi)
    }
}
