use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, PotentialModel};
use crate::scattering::{phase_shift, PhaseShiftOptions};

use super::bound::{find_bound_states, BoundStateOptions};
use super::continuation::{continuation_count, default_mu_grid, ContinuationReport, CrossingDirection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevinsonOptions {
    /// Allowed |η(0) − nπ|.
    pub tol_eta: f64,
    /// Relative tolerance of the radial integration.
    pub ode_tol: f64,
    /// Uniform μ steps for both the phase continuation and the crossing count.
    pub mu_steps: usize,
    /// Points of the bound-state energy scan.
    pub e_count: usize,
    /// Lowest energy of the bound-state scan; `None` for the default.
    pub e_floor: Option<f64>,
}

impl Default for LevinsonOptions {
    fn default() -> Self {
        Self { tol_eta: 1e-2, ode_tol: 1e-12, mu_steps: 200, e_count: 400, e_floor: None }
    }
}

/// |A(0) − ρ|·r0 below which the target sits on a zero-energy resonance.
/// The threshold proxy alone moves A by ~1e−10, and within this window the
/// scattering length exceeds 1/k_small by less than a factor of ten, so the
/// k_small extrapolation of η(0) no longer holds.
pub const RESONANCE_WINDOW: f64 = 1e-3;

/// μ at which the continued zero-momentum phase passes (m + 1/2)π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStep {
    pub mu: f64,
    /// Continuation interval containing the step.
    pub bracket: (f64, f64),
    pub direction: CrossingDirection,
}

#[derive(Debug, Clone)]
pub struct LevinsonReport {
    pub lambda: f64,
    /// Extrapolated η_λ(0).
    pub eta0: f64,
    /// (k, η) at k_small and 2 k_small.
    pub eta_small: [(f64, f64); 2],
    pub n_direct: usize,
    pub n_continuation: usize,
    pub bound_energies: Vec<f64>,
    pub continuation: ContinuationReport,
    /// Steps of the phase at k_small along μ.
    pub phase_steps: Vec<PhaseStep>,
    /// Phase steps and A-crossings pair up in order and direction, each
    /// crossing lying within 1e−3 of its step's bracket.
    pub staircase_consistent: bool,
    pub tol_eta: f64,
    pub pass: bool,
}

/// Checks η_λ(0) = n_λ π with n_λ counted twice: by an energy scan at the
/// target μ and by following A_λ(0, μ) from μ = 0.
///
/// η_λ(0) is extrapolated from k_small = 10⁻⁴/r0 and 2 k_small assuming
/// η(k) − η(0) ∝ k^{2λ}. Ambiguous crossings and zero-energy resonances
/// are reported as [`Error::Inconclusive`].
pub fn levinson_verify(
    channel: &ChannelParams,
    potential: &PotentialModel,
    opts: &LevinsonOptions,
) -> Result<LevinsonReport> {
    let lambda = channel.spectral_lambda()?;
    let r0 = potential.r0;
    let inconclusive = |e: Error| match e {
        Error::AmbiguousCrossing { .. } | Error::NearThresholdResonance { .. } => {
            Error::Inconclusive(format!("levinson: {e}"))
        }
        other => other,
    };

    let mu_grid = default_mu_grid(potential.mu, opts.mu_steps);
    let continuation = continuation_count(channel, potential, &mu_grid, opts.ode_tol).map_err(inconclusive)?;
    if let Some(Some(a)) = continuation.a_samples.last() {
        if (a - continuation.rho).abs() * r0 < RESONANCE_WINDOW {
            return Err(inconclusive(Error::NearThresholdResonance { a: *a, rho: continuation.rho }));
        }
    }

    let bound = find_bound_states(
        channel,
        potential,
        &BoundStateOptions { e_floor: opts.e_floor, e_count: opts.e_count, ..Default::default() },
    )?;

    let popts = PhaseShiftOptions { tol: opts.ode_tol, mu_steps: opts.mu_steps, ..Default::default() };
    let k_small = 1e-4 / r0;
    let p1 = phase_shift(channel, potential, k_small, &popts)?;
    let p2 = phase_shift(channel, potential, 2.0 * k_small, &popts)?;
    let w = 2f64.powf(2.0 * lambda);
    let eta0 = (w * p1.eta - p2.eta) / (w - 1.0);

    let phase_steps = phase_steps(&p1.path);
    let staircase_consistent = phase_steps.len() == continuation.events.len()
        && phase_steps
            .iter()
            .zip(&continuation.events)
            .all(|(s, e)| {
                s.direction == e.direction
                    && e.mu >= s.bracket.0 - STEP_SLACK
                    && e.mu <= s.bracket.1 + STEP_SLACK
            });

    let n_direct = bound.states.len();
    let n_continuation = continuation.n;
    let pass = (eta0 - n_direct as f64 * PI).abs() <= opts.tol_eta && n_direct == n_continuation;
    Ok(LevinsonReport {
        lambda,
        eta0,
        eta_small: [(k_small, p1.eta), (2.0 * k_small, p2.eta)],
        n_direct,
        n_continuation,
        bound_energies: bound.states.iter().map(|s| s.energy).collect(),
        continuation,
        phase_steps,
        staircase_consistent,
        tol_eta: opts.tol_eta,
        pass,
    })
}

const STEP_SLACK: f64 = 1e-3;

fn phase_steps(path: &[(f64, f64)]) -> Vec<PhaseStep> {
    let mut steps = Vec::new();
    for w in path.windows(2) {
        let ((m0, e0), (m1, e1)) = (w[0], w[1]);
        let (l0, l1) = ((e0 / PI - 0.5).floor(), (e1 / PI - 0.5).floor());
        if l1 > l0 {
            for _ in 0..(l1 - l0) as usize {
                steps.push(PhaseStep { mu: 0.5 * (m0 + m1), bracket: (m0, m1), direction: CrossingDirection::Down });
            }
        } else if l1 < l0 {
            for _ in 0..(l0 - l1) as usize {
                steps.push(PhaseStep { mu: 0.5 * (m0 + m1), bracket: (m0, m1), direction: CrossingDirection::Up });
            }
        }
    }
    steps
}
