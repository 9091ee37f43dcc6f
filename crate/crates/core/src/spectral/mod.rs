//! Bound states below threshold, Sturm–Liouville slope checks, the
//! μ-continuation crossing counter and the Levinson-theorem verifier.

mod bound;
mod continuation;
mod levinson;
mod matching;
mod sturm;

pub use bound::{default_energy_floor, find_bound_states, BoundState, BoundStateOptions, BoundStateSearch};
pub use continuation::{
    continuation_count, default_mu_grid, ContinuationReport, CrossingDirection, CrossingEvent,
    CROSSING_RESOLUTION, GRAZING_THRESHOLD,
};
pub use levinson::{levinson_verify, LevinsonOptions, LevinsonReport, PhaseStep, RESONANCE_WINDOW};
pub use matching::{matching_mismatch, threshold_energy};
pub use sturm::{exterior_square_integral, sturm_liouville_check, SturmSlopes};
