//! Self-consistent pointer fields, bistability and response of the pumped
//! Kerr resonator.

pub mod detuning;
pub mod pointer;
pub mod pump;
pub mod response;
pub mod stability;

pub use detuning::{pump_for_ratio, reduced_detuning, DetuningReference, ReducedDetuning};
pub use pointer::{
    select_branch, solve_pointer, solve_pointer_pump, solve_pointer_spectroscopy, solve_pointer_with,
    Branch, BranchPolicy, PointerField, PointerSolution,
};
pub use pump::{PumpEquation, PumpRoot};
pub use response::{
    linear_response_fields, quadratic_response_ratio, s_max_curve, LinearResponseForm, ResponseExpansion,
    SMaxPoint,
};
pub use stability::{
    bisect_threshold, critical_ratio, stability_diagram, window, Region, StabilityDiagram, StabilityModel,
    Thresholds,
};
