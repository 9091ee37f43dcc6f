use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{effective_equation, ChannelParams, EnergyValue, PotentialModel};
use crate::radial::{solve_regular, RadialGrid};
use crate::specfun::{bessel_jy, ln_gamma};

/// Log-derivative y′/y of the interior solution at r0⁻.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivative {
    pub a: f64,
    pub energy: f64,
    pub mu: f64,
    pub lambda: f64,
}

/// A_λ(E, μ) from the regular interior solution. Fails with
/// [`Error::NodeAtCutoff`] when y(r0) vanishes relative to max |y|.
pub fn log_derivative_interior(
    channel: &ChannelParams,
    potential: &PotentialModel,
    energy: f64,
    tol: f64,
) -> Result<LogDerivative> {
    let lambda = channel.real_lambda()?;
    let eq = effective_equation(channel, potential, EnergyValue::from_energy(energy))?;
    let grid = Arc::new(RadialGrid::new(potential.r0, potential.r0, 64, 0)?);
    let sol = solve_regular(&eq, &grid, tol)?;
    let (y, dy) = sol.at_r0();
    if y.norm() < 1e-12 * sol.max_abs() {
        return Err(Error::NodeAtCutoff { y0: y.norm() });
    }
    Ok(LogDerivative { a: (dy / y).re, energy, mu: potential.mu, lambda })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShiftOptions {
    /// Relative tolerance of the radial integration.
    pub tol: f64,
    /// Uniform μ steps from 0 to the target coupling.
    pub mu_steps: usize,
    /// Bisection floor for steps where the phase moves by more than π/2.
    pub min_mu_step: f64,
}

impl Default for PhaseShiftOptions {
    fn default() -> Self {
        Self { tol: 1e-12, mu_steps: 200, min_mu_step: 1e-4 }
    }
}

/// Matching data at fixed (k, μ), without continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPhase {
    /// Angle of the exterior solution in the (u_J, −u_N) plane; equals η
    /// modulo 2π up to the sign of the overall amplitude.
    pub angle: f64,
    pub tan_eta: f64,
    /// arctan(tan η) in (−π/2, π/2].
    pub eta_raw: f64,
    /// A at r0⁻, `None` when y(r0) vanishes.
    pub log_derivative: Option<f64>,
    /// η from a two-node fit of the exterior solution, in (−π/2, π/2].
    pub eta_fit_raw: f64,
}

impl MatchedPhase {
    /// |η_fit − η_raw| reduced modulo π.
    pub fn fit_discrepancy(&self) -> f64 {
        wrap_half_pi(self.eta_fit_raw - self.eta_raw).abs()
    }
}

/// A jump of the phase across a μ-interval at the bisection floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub mu: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShift {
    pub k: f64,
    pub mu: f64,
    /// η continued from η(k, 0) = 0.
    pub eta: f64,
    pub matched: MatchedPhase,
    pub jumps: Vec<JumpEvent>,
    /// (μ, η) at every point visited by the continuation, starting at (0, 0).
    pub path: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftCurve {
    pub lambda: f64,
    pub mu: f64,
    pub samples: Vec<PhaseShift>,
}

fn wrap_pi(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn wrap_half_pi(d: f64) -> f64 {
    let mut d = d % PI;
    if d > FRAC_PI_2 {
        d -= PI;
    } else if d <= -FRAC_PI_2 {
        d += PI;
    }
    d
}

fn atan_half_open(t: f64) -> f64 {
    let e = t.atan();
    if e == -FRAC_PI_2 {
        FRAC_PI_2
    } else {
        e
    }
}

/// √r·J_λ(kr), √r·N_λ(kr) and their r-derivatives.
struct FreeWaves {
    uj: f64,
    duj: f64,
    un: f64,
    dun: f64,
}

fn free_waves(lambda: f64, k: f64, r: f64) -> Result<FreeWaves> {
    let p = bessel_jy(lambda, k * r)?;
    let s = r.sqrt();
    Ok(FreeWaves {
        uj: s * p.j.value,
        duj: p.j.value / (2.0 * s) + s * k * p.j.derivative,
        un: s * p.y.value,
        dun: p.y.value / (2.0 * s) + s * k * p.y.derivative,
    })
}

/// Exterior nodes used by the two-point fit: close enough to r0 that
/// u_J, u_N stay independent at any k.
fn matching_grid(r0: f64, k: f64) -> Result<Arc<RadialGrid>> {
    let d = (0.25 * r0).min(0.5 / k);
    Ok(Arc::new(RadialGrid::from_nodes(vec![crate::radial::R_MIN_FACTOR * r0, r0, r0 + d, r0 + 2.0 * d], 1)?))
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("phase shift needs k > 0, got {k}")));
    }
    Ok(())
}

/// Phase data at the coupling stored in `potential`, reduced modulo π.
pub fn phase_shift_fixed(channel: &ChannelParams, potential: &PotentialModel, k: f64, tol: f64) -> Result<MatchedPhase> {
    check_k(k)?;
    let lambda = channel.spectral_lambda_or_positive()?;
    let r0 = potential.r0;
    let grid = matching_grid(r0, k)?;
    let eq = effective_equation(channel, potential, EnergyValue::from_k(k))?;
    let sol = solve_regular(&eq, &grid, tol)?;
    let scale = sol.chart_scale();
    let i0 = grid.r0_index();
    let y: Vec<f64> = sol.y.iter().map(|v| (v * scale).re).collect();
    let dy: Vec<f64> = sol.dy.iter().map(|v| (v * scale).re).collect();

    let w0 = free_waves(lambda, k, r0)?;
    let norm = y[i0].abs().max(dy[i0].abs());
    let (y0, dy0) = (y[i0] / norm, dy[i0] / norm);
    let x = y0 * w0.dun - dy0 * w0.un;
    let z = y0 * w0.duj - dy0 * w0.uj;
    let angle = z.atan2(x);
    let tan_eta = z / x;
    let eta_raw = atan_half_open(tan_eta);
    let max_y = y[..=i0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let log_derivative = if y[i0].abs() < 1e-12 * max_y { None } else { Some(dy[i0] / y[i0]) };

    let w1 = free_waves(lambda, k, grid.nodes()[i0 + 1])?;
    let w2 = free_waves(lambda, k, grid.nodes()[i0 + 2])?;
    let (y1, y2) = (y[i0 + 1] / norm, y[i0 + 2] / norm);
    // y = α u_J + β u_N on the two nodes; tan η = −β/α.
    let num = w2.uj * y1 - w1.uj * y2;
    let den = y1 * w2.un - y2 * w1.un;
    let eta_fit_raw = atan_half_open(num / den);

    Ok(MatchedPhase { angle, tan_eta, eta_raw, log_derivative, eta_fit_raw })
}

impl ChannelParams {
    fn spectral_lambda_or_positive(&self) -> Result<f64> {
        let lambda = self.real_lambda()?;
        if !(lambda > 0.0) {
            return Err(Error::InvalidInput(format!("phase shift needs lambda > 0, got {lambda}")));
        }
        Ok(lambda)
    }
}

/// ODE tolerance for the intermediate points of the μ continuation.
const TRACK_TOL: f64 = 1e-9;

/// η_λ(k, μ) with μ taken from `potential`, continued in μ from η(k, 0) = 0.
pub fn phase_shift(
    channel: &ChannelParams,
    potential: &PotentialModel,
    k: f64,
    opts: &PhaseShiftOptions,
) -> Result<PhaseShift> {
    if opts.mu_steps == 0 || !(opts.min_mu_step > 0.0) {
        return Err(Error::InvalidInput("mu_steps must be >= 1 and min_mu_step > 0".into()));
    }
    let target = potential.mu;
    let matched = phase_shift_fixed(channel, potential, k, opts.tol)?;
    if target == 0.0 {
        return Ok(PhaseShift { k, mu: 0.0, eta: 0.0, matched, jumps: Vec::new(), path: vec![(0.0, 0.0)] });
    }
    // The unwrapped sum telescopes to θ(target) − θ(0) + 2πm, so the
    // intermediate angles only have to pin the branch.
    let track_tol = opts.tol.max(TRACK_TOL);
    let angle_with = |mu: f64, tol: f64| -> Result<f64> {
        match phase_shift_fixed(channel, &potential.at_mu(mu), k, tol) {
            Err(Error::DegenerateCoupling { .. }) => {
                let nudged = mu + 1e-9 * target.abs().max(1e-300);
                Ok(phase_shift_fixed(channel, &potential.at_mu(nudged), k, tol)?.angle)
            }
            other => other.map(|m| m.angle),
        }
    };
    let angle_at = |mu: f64| angle_with(mu, track_tol);
    let start = angle_with(0.0, opts.tol)?;
    let mut unwrapped = 0.0;
    let mut jumps = Vec::new();
    let mut path = vec![(0.0, 0.0)];
    let mut prev = (0.0, start);
    for i in 1..=opts.mu_steps {
        let mu = if i == opts.mu_steps { target } else { target * i as f64 / opts.mu_steps as f64 };
        let th = if i == opts.mu_steps { matched.angle } else { angle_at(mu)? };
        advance(&angle_at, prev, (mu, th), opts.min_mu_step, &mut unwrapped, &mut jumps, &mut path)?;
        prev = (mu, th);
    }
    Ok(PhaseShift { k, mu: target, eta: unwrapped, matched, jumps, path })
}

fn advance<F: Fn(f64) -> Result<f64>>(
    angle_at: &F,
    a: (f64, f64),
    b: (f64, f64),
    min_step: f64,
    acc: &mut f64,
    jumps: &mut Vec<JumpEvent>,
    path: &mut Vec<(f64, f64)>,
) -> Result<()> {
    let d = wrap_pi(b.1 - a.1);
    if d.abs() > FRAC_PI_2 {
        if (b.0 - a.0).abs() > min_step {
            let m = 0.5 * (a.0 + b.0);
            let mid = (m, angle_at(m)?);
            advance(angle_at, a, mid, min_step, acc, jumps, path)?;
            return advance(angle_at, mid, b, min_step, acc, jumps, path);
        }
        jumps.push(JumpEvent { mu: 0.5 * (a.0 + b.0), delta: d });
    }
    *acc += d;
    path.push((b.0, *acc));
    Ok(())
}

/// Phase shifts over a k-grid, evaluated in parallel, returned in input order.
pub fn phase_shift_curve(
    channel: &ChannelParams,
    potential: &PotentialModel,
    ks: &[f64],
    opts: &PhaseShiftOptions,
) -> Result<PhaseShiftCurve> {
    let lambda = channel.spectral_lambda_or_positive()?;
    let samples = ks.par_iter().map(|&k| phase_shift(channel, potential, k, opts)).collect::<Result<Vec<_>>>()?;
    Ok(PhaseShiftCurve { lambda, mu: potential.mu, samples })
}

/// Lowest-order small-k form of tan η from the zero-energy log-derivative:
///
/// ```text
/// tan η ≈ −π (kr0)^{2λ} / (2^{2λ} λ Γ(λ)²) · (A0 − ρ̃)/(A0 − ρ)
/// ```
///
/// with ρ = (1/2 − λ)/r0 and ρ̃ = (λ + 1/2)/r0.
pub fn low_k_phase_asymptotic(lambda: f64, a0: f64, k: f64, r0: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!("low-k form needs lambda > 0, got {lambda}")));
    }
    if !(r0 > 0.0) || !(k > 0.0) {
        return Err(Error::InvalidInput("low-k form needs k > 0 and r0 > 0".into()));
    }
    if !(k * r0 < 0.1) {
        return Err(Error::InvalidInput(format!("low-k form needs k*r0 < 0.1, got {}", k * r0)));
    }
    let rho = (0.5 - lambda) / r0;
    let rho_tilde = (lambda + 0.5) / r0;
    if (a0 - rho).abs() < 1e-10 {
        return Err(Error::NearThresholdResonance { a: a0, rho });
    }
    let log_pref = 2.0 * lambda * (0.5 * k * r0).ln() - 2.0 * ln_gamma(lambda)?;
    Ok(-PI / lambda * log_pref.exp() * (a0 - rho_tilde) / (a0 - rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s_wave_oracle(k: f64, v0: f64, r0: f64) -> f64 {
        let kp = (k * k + v0).sqrt();
        ((k / kp) * (kp * r0).tan()).atan() - k * r0
    }

    #[test]
    fn free_phase_is_zero() {
        let ch = ChannelParams::new(3.0, 1.0);
        let free = PotentialModel::free(1.0).unwrap();
        let p = phase_shift(&ch, &free, 0.7, &PhaseShiftOptions::default()).unwrap();
        assert_eq!(p.eta, 0.0);
        assert!(p.matched.tan_eta.abs() < 1e-12);
    }

    #[test]
    fn square_well_matches_closed_form() {
        let ch = ChannelParams::new(3.0, 0.0);
        let well = PotentialModel::square_well(4.0, 1.0).unwrap();
        for &k in &[0.1, 0.5, 2.0] {
            let p = phase_shift(&ch, &well, k, &PhaseShiftOptions { mu_steps: 20, ..Default::default() }).unwrap();
            let d = wrap_half_pi(p.eta - s_wave_oracle(k, 4.0, 1.0));
            assert!(d.abs() < 1e-9, "k={k} d={d}");
            assert!(p.matched.fit_discrepancy() < 1e-8);
        }
    }

    #[test]
    fn low_k_zero_numerator() {
        assert_eq!(low_k_phase_asymptotic(1.5, 2.0, 1e-3, 1.0).unwrap(), 0.0);
        assert!(matches!(
            low_k_phase_asymptotic(1.5, -1.0, 1e-3, 1.0),
            Err(Error::NearThresholdResonance { .. })
        ));
    }
}
