use crate::error::{invalid, Result};

/// Kerr nonlinear resonator, H_r = ω_r a†a + (K/2) a†²a² + (K′/3) a†³a³, with one-
/// and two-photon loss rates κ and κ_NL. All values in MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSpec {
    pub omega_r: f64,
    pub kerr: f64,
    pub kerr3: f64,
    pub kappa: f64,
    pub kappa_nl: f64,
}

impl ResonatorSpec {
    pub fn new(omega_r: f64, kerr: f64, kerr3: f64, kappa: f64, kappa_nl: f64) -> Result<Self> {
        let r = Self {
            omega_r,
            kerr,
            kerr3,
            kappa,
            kappa_nl,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.omega_r, self.kerr, self.kerr3, self.kappa, self.kappa_nl]
            .iter()
            .any(|x| !x.is_finite())
        {
            return Err(invalid("resonator", "non-finite entry"));
        }
        if self.kappa <= 0.0 {
            return Err(invalid("kappa", "must be > 0"));
        }
        if self.kappa_nl < 0.0 {
            return Err(invalid("kappa_nl", "must be >= 0"));
        }
        Ok(())
    }

    /// Linear resonator with the same frequency and single-photon loss.
    pub fn linear(&self) -> Self {
        Self {
            kerr: 0.0,
            kerr3: 0.0,
            kappa_nl: 0.0,
            ..*self
        }
    }

    /// Pulled frequency ω_r′ = ω_r + 2K n + 3K′ n².
    pub fn pulled(&self, n: f64) -> f64 {
        self.omega_r + 2.0 * self.kerr * n + 3.0 * self.kerr3 * n * n
    }

    /// Pump frequency at reduced detuning `omega_reduced` from `reference`,
    /// i.e. the inverse of Ω = 2(ω_ref − ω_p)/κ.
    pub fn pump_for_detuning(&self, reference: f64, omega_reduced: f64) -> f64 {
        reference - omega_reduced * self.kappa / 2.0
    }
}
