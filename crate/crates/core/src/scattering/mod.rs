//! Scattering observables: Wronskian and Hermiticity audits of the regular
//! and Jost solutions, the interior log-derivative at the cutoff, and phase
//! shifts with μ-continuation.
//!
//! Jost solutions follow the convention lim e^{ikr} f(λ, k, r) = 1, i.e.
//! f ~ e^{−ikr}; many texts use the opposite sign of k. Outside the cutoff f
//! is the free (Riccati–Hankel) Jost solution, equal to e^{−ikr} only for
//! λ = 1/2.

mod hermiticity;
mod phase;
mod wronskian;

pub use hermiticity::{hermiticity_residual, HermiticityKind, HermiticityResidual};
pub use phase::{
    log_derivative_interior, low_k_phase_asymptotic, phase_shift, phase_shift_curve, phase_shift_fixed,
    JumpEvent, LogDerivative, MatchedPhase, PhaseShift, PhaseShiftCurve, PhaseShiftOptions,
};
pub use wronskian::{
    audit_jost_pair, audit_phi_pair, wronskian, wronskian_report, WronskianPair, WronskianReport,
    CONDITION_LIMIT,
};
