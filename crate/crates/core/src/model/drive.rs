use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveRole {
    Pump,
    Spectroscopy,
}

/// A coherent drive on the resonator, ε e^{−iωt} a† + h.c. (MHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub epsilon: Complex64,
    pub omega: f64,
    pub role: DriveRole,
}

impl DriveSpec {
    pub fn pump(epsilon: f64, omega: f64) -> Self {
        Self {
            epsilon: Complex64::new(epsilon, 0.0),
            omega,
            role: DriveRole::Pump,
        }
    }

    pub fn spectroscopy(epsilon: f64, omega: f64) -> Self {
        Self {
            epsilon: Complex64::new(epsilon, 0.0),
            omega,
            role: DriveRole::Spectroscopy,
        }
    }

    pub fn with_amplitude(self, epsilon: f64) -> Self {
        Self {
            epsilon: Complex64::new(epsilon, 0.0),
            ..self
        }
    }

    pub fn with_frequency(self, omega: f64) -> Self {
        Self { omega, ..self }
    }
}

/// The drive configuration of one scenario: exactly one pump, at most one
/// spectroscopy tone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drives {
    pub pump: DriveSpec,
    pub spectroscopy: Option<DriveSpec>,
}

impl Drives {
    pub fn from_list(drives: &[DriveSpec]) -> Result<Self> {
        let pumps: Vec<_> = drives.iter().filter(|d| d.role == DriveRole::Pump).collect();
        let spec: Vec<_> = drives
            .iter()
            .filter(|d| d.role == DriveRole::Spectroscopy)
            .collect();
        if pumps.len() != 1 {
            return Err(invalid("drive", format!("exactly one pump is required, found {}", pumps.len())));
        }
        if spec.len() > 1 {
            return Err(invalid(
                "drive",
                format!("at most one spectroscopy drive is allowed, found {}", spec.len()),
            ));
        }
        for d in drives {
            if !(d.omega.is_finite() && d.epsilon.re.is_finite() && d.epsilon.im.is_finite()) {
                return Err(invalid("drive", "non-finite amplitude or frequency"));
            }
        }
        Ok(Self {
            pump: *pumps[0],
            spectroscopy: spec.first().map(|d| **d),
        })
    }
}
