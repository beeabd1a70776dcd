use crate::error::{invalid, Result};

/// Truncation, tolerances and averaging of a brute-force run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertConfig {
    /// Qubit levels kept.
    pub levels: usize,
    /// Fock states kept, photon numbers 0..fock.
    pub fock: usize,
    pub rtol: f64,
    pub atol: f64,
    /// Shortest averaging window, µs; windows are rounded up to an integer
    /// number of beat periods between the spectroscopy tone and the pump.
    pub window_us: f64,
    /// Integration horizon, µs.
    pub horizon_us: f64,
    /// Relative change between consecutive window averages regarded as
    /// steady.
    pub steady_tol: f64,
    /// Observables below this magnitude are compared in absolute terms
    /// against `steady_tol * steady_floor`.
    pub steady_floor: f64,
    /// Largest tolerated population of the two highest Fock states.
    pub leakage_tol: f64,
    /// Double the cutoff once when leakage is exceeded.
    pub escalate: bool,
    /// Offset of the common rotating frame from the pump frequency, MHz.
    pub frame_offset: f64,
    /// A minimum eigenvalue of ρ below this aborts the run.
    pub positivity_abort: f64,
    /// Window-end differences collected before each extrapolation jump
    /// towards the fixed point; 0 disables it.
    pub extrapolation: usize,
}

impl Default for HilbertConfig {
    fn default() -> Self {
        Self {
            levels: 3,
            fock: 32,
            rtol: 1e-6,
            atol: 1e-9,
            window_us: 0.2,
            horizon_us: 60.0,
            steady_tol: 1e-4,
            steady_floor: 1e-2,
            leakage_tol: 1e-4,
            escalate: true,
            frame_offset: 0.0,
            positivity_abort: -1e-6,
            extrapolation: 5,
        }
    }
}

impl HilbertConfig {
    pub fn dim(&self) -> usize {
        self.levels * self.fock
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(invalid("levels", "must be at least 2"));
        }
        if self.fock < 2 {
            return Err(invalid("fock", "must be at least 2"));
        }
        for (name, v) in [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("window_us", self.window_us),
            ("horizon_us", self.horizon_us),
            ("steady_tol", self.steady_tol),
            ("leakage_tol", self.leakage_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and > 0"));
            }
        }
        if self.horizon_us < 2.0 * self.window_us {
            return Err(invalid("horizon_us", "must cover at least two windows"));
        }
        Ok(())
    }

    /// Cutoff rule of thumb: at least four times the expected photon number.
    pub fn fock_for(n_expected: f64) -> usize {
        ((4.0 * n_expected).ceil() as usize).max(8)
    }
}
