use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{effective_equation, ChannelParams, EnergyValue, PotentialModel};
use crate::radial::{solve_regular, RadialGrid, RadialSolution};
use crate::specfun::log_derivative_exterior;

/// Magnitude ε_E of the negative energy standing in for E = 0.
pub fn threshold_energy(potential: &PotentialModel) -> f64 {
    -1e-10 * potential.max_abs_local().max(1.0)
}

/// κ = √(−E) for E ≤ 0.
pub(crate) fn kappa_of(e: f64) -> Result<f64> {
    if !(e <= 0.0) {
        return Err(Error::InvalidInput(format!("bound-state matching needs E <= 0, got {e}")));
    }
    Ok((-e).sqrt())
}

/// Interior grid resolving the oscillations of the deepest local well.
pub(crate) fn interior_grid(potential: &PotentialModel, e: f64) -> Result<Arc<RadialGrid>> {
    let depth = potential.mu.abs() * potential.max_abs_local() + e.abs();
    let n = (20.0 * depth.sqrt() * potential.r0).ceil().max(200.0) as usize;
    Ok(Arc::new(RadialGrid::new(potential.r0, potential.r0, n, 0)?))
}

/// Interior regular solution at energy E, with (y, y′) at r0 in the
/// pole-free chart (multiplied by det(I − μCM) for kernels).
pub(crate) struct Interior {
    pub solution: RadialSolution,
    pub y: f64,
    pub dy: f64,
}

impl Interior {
    pub fn log_derivative(&self) -> Result<f64> {
        let max = self.solution.max_abs();
        let (y, dy) = self.solution.at_r0();
        if y.norm() < 1e-12 * max {
            return Err(Error::NodeAtCutoff { y0: y.norm() });
        }
        Ok((dy / y).re)
    }

    /// Sign changes of y on the interior grid.
    pub fn nodes(&self) -> usize {
        let i0 = self.solution.r0_index();
        let mut count = 0;
        let mut last = 0.0f64;
        for v in &self.solution.y[..i0] {
            let s = v.re;
            if s != 0.0 {
                if last != 0.0 && s.signum() != last.signum() {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

pub(crate) fn interior(
    channel: &ChannelParams,
    potential: &PotentialModel,
    e: f64,
    grid: &Arc<RadialGrid>,
    tol: f64,
) -> Result<Interior> {
    let eq = effective_equation(channel, potential, EnergyValue::from_energy(e))?;
    let solution = solve_regular(&eq, grid, tol)?;
    let scale = solution.chart_scale();
    let (y, dy) = solution.at_r0();
    Ok(Interior { y: (y * scale).re, dy: (dy * scale).re, solution })
}

/// Interior solution at E, nudging E when the kernel system is singular.
pub(crate) fn interior_nudged(
    channel: &ChannelParams,
    potential: &PotentialModel,
    e: f64,
    grid: &Arc<RadialGrid>,
    tol: f64,
) -> Result<Interior> {
    match interior(channel, potential, e, grid, tol) {
        Err(Error::DegenerateCoupling { .. }) => {
            interior(channel, potential, e * (1.0 - 1e-9) - 1e-15, grid, tol)
        }
        other => other,
    }
}

/// G(E) = y′(r0) − A_ext(E)·y(r0) in the pole-free chart, divided by a
/// positive scale. Continuous in E; its zeros are the bound states.
pub(crate) fn matching_function(inner: &Interior, a_ext: f64) -> f64 {
    let scale = inner.y.abs().max(inner.dy.abs()).max(f64::MIN_POSITIVE);
    (inner.dy - a_ext * inner.y) / scale
}

/// A_int(E) − A_ext(E) at r0 for E ≤ 0, with μ taken from `potential`.
/// Zero exactly at bound states.
pub fn matching_mismatch(channel: &ChannelParams, potential: &PotentialModel, e: f64, tol: f64) -> Result<f64> {
    let lambda = channel.spectral_lambda()?;
    let kappa = kappa_of(e)?;
    let a_ext = log_derivative_exterior(lambda, kappa, potential.r0)?;
    let grid = interior_grid(potential, e)?;
    let inner = interior(channel, potential, e, &grid, tol)?;
    Ok(inner.log_derivative()? - a_ext)
}
