use std::sync::Arc;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, PotentialModel};
use crate::radial::{Normalization, RadialGrid, RadialSolution, TailRule};
use crate::specfun::{bessel_i_k, log_derivative_exterior};

use super::matching::{interior_grid, interior_nudged, matching_function, threshold_energy, Interior};
use super::sturm::exterior_square_integral;

#[derive(Debug, Clone)]
pub struct BoundState {
    pub energy: f64,
    pub kappa: f64,
    pub mu: f64,
    pub lambda: f64,
    /// Unit-norm solution on [r_min, 3 r0]; the exterior part is √r·K_λ(κr).
    pub solution: RadialSolution,
    /// |G| at the located energy, G = (y′ − A_ext y)/max(|y|, |y′|) at r0.
    /// Scale-free, unlike A_int − A_ext, which is steep in E for deep states.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateOptions {
    /// Lowest energy scanned; `None` picks [`default_energy_floor`].
    pub e_floor: Option<f64>,
    /// Points of the log-spaced energy scan.
    pub e_count: usize,
    /// Relative bisection tolerance on E.
    pub tol: f64,
    /// Relative tolerance of the radial integration.
    pub ode_tol: f64,
}

impl Default for BoundStateOptions {
    fn default() -> Self {
        Self { e_floor: None, e_count: 400, tol: 1e-12, ode_tol: 1e-11 }
    }
}

#[derive(Debug, Clone)]
pub struct BoundStateSearch {
    pub states: Vec<BoundState>,
    pub e_floor: f64,
    pub e_ceiling: f64,
    pub e_count: usize,
    /// Oscillation count of bound states below the ceiling (local
    /// potentials only).
    pub node_count: Option<usize>,
}

/// −(1.5·μ·max|V| + μ·n·max|Cᵢⱼ|·max(1, r0^{2p+1})), at least −1/r0².
pub fn default_energy_floor(channel: &ChannelParams, potential: &PotentialModel) -> f64 {
    let mu = potential.mu.abs();
    let mut depth = 1.5 * mu * potential.max_abs_local();
    if potential.has_kernel() {
        let p = channel.weight_exponent().unwrap_or(0.0);
        let reach = potential.r0.powf(2.0 * p + 1.0).max(1.0);
        depth += mu * potential.kernel.rank() as f64 * potential.kernel_strength_bound() * reach;
    }
    -depth.max(1.0 / (potential.r0 * potential.r0))
}

/// Number of bound states below E for a local potential: interior nodes of
/// the regular solution plus one if it also vanishes outside r0.
pub(crate) fn oscillation_count(inner: &Interior, a_ext: f64) -> Result<usize> {
    let a_int = inner.log_derivative()?;
    Ok(inner.nodes() + usize::from(a_int < a_ext))
}

/// All bound states in [E_floor, −ε_E), by a sign scan of the pole-free
/// matching function on a log-spaced grid and bisection.
pub fn find_bound_states(
    channel: &ChannelParams,
    potential: &PotentialModel,
    opts: &BoundStateOptions,
) -> Result<BoundStateSearch> {
    let lambda = channel.spectral_lambda()?;
    if opts.e_count < 2 {
        return Err(Error::InvalidInput("energy scan needs at least 2 points".into()));
    }
    let e_floor = opts.e_floor.unwrap_or_else(|| default_energy_floor(channel, potential));
    let e_ceiling = threshold_energy(potential);
    if !(e_floor < e_ceiling) {
        return Err(Error::InvalidInput(format!("energy floor {e_floor} must lie below {e_ceiling}")));
    }
    let local = !(potential.has_kernel() && potential.mu != 0.0);
    let grid = interior_grid(potential, e_floor)?;
    if local {
        let floor_inner = interior_nudged(channel, potential, e_floor, &grid, opts.ode_tol)?;
        let a_ext = log_derivative_exterior(lambda, (-e_floor).sqrt(), potential.r0)?;
        let below = oscillation_count(&floor_inner, a_ext)?;
        if below != 0 {
            return Err(Error::ScanTooCoarse(format!("energy floor {e_floor} lies above {below} bound state(s)")));
        }
    }
    let mut count = opts.e_count;
    for _attempt in 0..4 {
        let search = scan(channel, potential, lambda, e_floor, e_ceiling, count, &grid, opts)?;
        if search.node_count.is_none_or(|n| n == search.states.len()) {
            return Ok(search);
        }
        count *= 2;
    }
    Err(Error::ScanTooCoarse(format!(
        "energy scan with {count} points disagrees with the oscillation count"
    )))
}

#[allow(clippy::too_many_arguments)]
fn scan(
    channel: &ChannelParams,
    potential: &PotentialModel,
    lambda: f64,
    e_floor: f64,
    e_ceiling: f64,
    count: usize,
    grid: &Arc<RadialGrid>,
    opts: &BoundStateOptions,
) -> Result<BoundStateSearch> {
    let r0 = potential.r0;
    let (la, lb) = ((-e_floor).ln(), (-e_ceiling).ln());
    let energies: Vec<f64> = (0..count)
        .map(|i| {
            if i == 0 {
                e_floor
            } else if i == count - 1 {
                e_ceiling
            } else {
                -(la + (lb - la) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect();
    let g = |e: f64| -> Result<(f64, Interior)> {
        let inner = interior_nudged(channel, potential, e, grid, opts.ode_tol)?;
        let a_ext = log_derivative_exterior(lambda, (-e).sqrt(), r0)?;
        Ok((matching_function(&inner, a_ext), inner))
    };
    let values: Vec<f64> = energies.par_iter().map(|&e| g(e).map(|v| v.0)).collect::<Result<_>>()?;

    let brackets: Vec<(f64, f64, f64)> = (0..count - 1)
        .filter(|&i| values[i] == 0.0 || values[i].signum() != values[i + 1].signum())
        .map(|i| (energies[i], values[i], energies[i + 1]))
        .collect();
    let mut states = brackets
        .par_iter()
        .map(|&(lo, glo, hi)| {
            let (mut a, mut b) = (lo, hi);
            while (b - a) > opts.tol * a.abs().max(e_ceiling.abs()) {
                let m = 0.5 * (a + b);
                let (gm, _) = g(m)?;
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if gm.signum() == glo.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            build_state(channel, potential, lambda, 0.5 * (a + b), opts.ode_tol)
        })
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));

    let local = !(potential.has_kernel() && potential.mu != 0.0);
    let node_count = if local {
        let top = g(e_ceiling)?.1;
        Some(oscillation_count(&top, log_derivative_exterior(lambda, (-e_ceiling).sqrt(), r0)?)?)
    } else {
        None
    };
    Ok(BoundStateSearch { states, e_floor, e_ceiling, e_count: count, node_count })
}

fn build_state(
    channel: &ChannelParams,
    potential: &PotentialModel,
    lambda: f64,
    e: f64,
    tol: f64,
) -> Result<BoundState> {
    let r0 = potential.r0;
    let kappa = (-e).sqrt();
    let inner_grid = interior_grid(potential, e)?;
    let inner = interior_nudged(channel, potential, e, &inner_grid, tol)?;
    let a_ext = log_derivative_exterior(lambda, kappa, r0)?;
    let residual = matching_function(&inner, a_ext).abs();
    // interior nodes, then analytic exterior continuation up to 3 r0
    let sol = &inner.solution;
    let i0 = sol.r0_index();
    let mut nodes: Vec<f64> = sol.grid.interior().to_vec();
    let mut y: Vec<C> = sol.y[..=i0].to_vec();
    let mut dy: Vec<C> = sol.dy[..=i0].to_vec();
    let y0 = y[i0];
    let k0 = bessel_i_k(lambda, kappa * r0)?.k;
    let n_out = 40;
    for j in 1..=n_out {
        let r = r0 * (1.0 + 2.0 * j as f64 / n_out as f64);
        let kr = bessel_i_k(lambda, kappa * r)?.k;
        let ratio = kr.value / k0.value * (-(kappa * (r - r0))).exp();
        let shape = (r / r0).sqrt() * ratio;
        let log_d = 0.5 / r + kappa * kr.derivative / kr.value;
        nodes.push(r);
        y.push(y0 * shape);
        dy.push(y0 * shape * log_d);
    }
    let grid = Arc::new(RadialGrid::from_nodes(nodes, i0)?);
    let sq: Vec<C> = y.iter().map(|v| v * v.conj()).collect();
    let interior_norm = grid.integrate_interior(&sq, TailRule::PowerLaw(2.0 * lambda + 1.0)).re;
    let exterior_norm = y0.norm_sqr() * exterior_square_integral(lambda, kappa, r0)?;
    let scale = 1.0 / (interior_norm + exterior_norm).sqrt();
    let solution = RadialSolution {
        grid,
        y: y.iter().map(|v| v * scale).collect(),
        dy: dy.iter().map(|v| v * scale).collect(),
        normalization: Normalization::MatchedPhysical,
        lambda: C::new(lambda, 0.0),
        k2: C::new(e, 0.0),
        mu: potential.mu,
        nonlocal: None,
    };
    Ok(BoundState { energy: e, kappa, mu: potential.mu, lambda, solution, residual })
}
