use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "transition {transition} ({lower}->{upper}) is resonant with the drive at {drive_mhz} MHz \
         (detuning {detuning_mhz:.3e} MHz is inside the guard band)"
    )]
    Resonance {
        transition: usize,
        lower: usize,
        upper: usize,
        drive_mhz: f64,
        detuning_mhz: f64,
    },

    #[error("dressed transition {transition} is resonant with the pulled resonator (detuning {detuning_mhz:.3e} MHz)")]
    DressedResonance { transition: usize, detuning_mhz: f64 },

    #[error("transmon spectrum not converged at charge cutoff {cutoff}: relative shift {shift:.3e}")]
    NotConverged { cutoff: usize, shift: f64 },

    #[error("pointer equation has no non-negative photon-number root (eps = {eps_mhz} MHz)")]
    NoPhysicalRoot { eps_mhz: f64 },

    #[error("branch is ambiguous under the strict policy: stable photon numbers {roots:?}")]
    AmbiguousBranch { roots: Vec<f64> },

    #[error("pointer residual {residual:.3e} exceeds bound {bound:.3e}")]
    Residual { residual: f64, bound: f64 },

    #[error("pointer fields missing for qubit state {state}")]
    UnsolvedPointer { state: usize },

    #[error("no unique steady state: relaxation, heating and drive all vanish")]
    NoUniqueSteadyState,

    #[error("Fock cutoff {fock} too small: top-state population {leakage:.3e}")]
    Leakage { fock: usize, leakage: f64 },

    #[error("density matrix lost positivity: minimum eigenvalue {min_eigenvalue:.3e} at t = {time_us} us")]
    PositivityViolated { min_eigenvalue: f64, time_us: f64 },

    #[error("integrator step size underflow at t = {time_us} us")]
    StepSizeUnderflow { time_us: f64 },

    #[error("{0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
