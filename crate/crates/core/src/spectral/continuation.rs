use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, PotentialModel};
use crate::radial::RadialGrid;

use super::matching::{interior_grid, interior_nudged, threshold_energy};

/// Bracket width at which a crossing is considered located.
pub const CROSSING_RESOLUTION: f64 = 1e-5;

/// |A − ρ| below which a sample without a sign change is called grazing.
pub const GRAZING_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingDirection {
    /// A(0, μ) decreases through ρ: a bound state appears.
    Down,
    /// A(0, μ) increases through ρ: a bound state leaves.
    Up,
}

impl CrossingDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingDirection::Down => "down",
            CrossingDirection::Up => "up",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    pub mu: f64,
    pub bracket: (f64, f64),
    pub direction: CrossingDirection,
}

/// Crossings of A_λ(0, μ) through ρ_λ = (1/2 − λ)/r0 along a μ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationReport {
    pub lambda: f64,
    pub mu_grid: Vec<f64>,
    /// A at each grid point; `None` where y(r0) vanishes.
    pub a_samples: Vec<Option<f64>>,
    pub rho: f64,
    pub events: Vec<CrossingEvent>,
    pub n_down: usize,
    pub n_up: usize,
    pub n: usize,
    /// (μ, η_λ(0, μ)) implied by the events: π times the running count.
    pub staircase: Vec<(f64, f64)>,
}

/// `steps` uniform intervals on [0, mu_max].
pub fn default_mu_grid(mu_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| if i == steps { mu_max } else { mu_max * i as f64 / steps as f64 }).collect()
}

struct Sample {
    d: f64,
    a: Option<f64>,
}

fn sample(
    channel: &ChannelParams,
    potential: &PotentialModel,
    mu: f64,
    rho: f64,
    grid: &Arc<RadialGrid>,
    tol: f64,
) -> Result<Sample> {
    let p = potential.at_mu(mu);
    let e = threshold_energy(potential);
    let inner = interior_nudged(channel, &p, e, grid, tol)?;
    let scale = inner.y.abs().max(inner.dy.abs()).max(f64::MIN_POSITIVE);
    let d = (inner.dy - rho * inner.y) / scale;
    let a = inner.log_derivative().ok();
    Ok(Sample { d, a })
}

/// Counts bound states by following A_λ(0, μ) along `mu_grid` (which must
/// start at 0 and increase). E = 0 is represented by [`threshold_energy`].
pub fn continuation_count(
    channel: &ChannelParams,
    potential: &PotentialModel,
    mu_grid: &[f64],
    tol: f64,
) -> Result<ContinuationReport> {
    let lambda = channel.spectral_lambda()?;
    if mu_grid.first() != Some(&0.0) {
        return Err(Error::InvalidInput("continuation grid must start at mu = 0".into()));
    }
    if mu_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("continuation grid must be strictly increasing".into()));
    }
    let r0 = potential.r0;
    let rho = (0.5 - lambda) / r0;
    let mu_max = mu_grid.last().copied().unwrap_or(0.0).abs();
    let grid = interior_grid(&potential.at_mu(mu_max.max(potential.mu.abs())), 0.0)?;
    let samples: Vec<Sample> = mu_grid
        .par_iter()
        .map(|&mu| sample(channel, potential, mu, rho, &grid, tol))
        .collect::<Result<_>>()?;

    let mut events = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        if s.d == 0.0 {
            return Err(Error::AmbiguousCrossing { mu: mu_grid[i] });
        }
        if i + 1 < samples.len() && s.d.signum() != samples[i + 1].d.signum() {
            events.push(refine(channel, potential, rho, &grid, tol, (mu_grid[i], s.d), mu_grid[i + 1])?);
            continue;
        }
        let near = s.a.is_some_and(|a| (a - rho).abs() < GRAZING_THRESHOLD);
        let crossing_adjacent = i > 0 && samples[i - 1].d.signum() != s.d.signum();
        if near && !crossing_adjacent {
            return Err(Error::AmbiguousCrossing { mu: mu_grid[i] });
        }
    }
    let n_down = events.iter().filter(|e| e.direction == CrossingDirection::Down).count();
    let n_up = events.len() - n_down;
    if n_up > n_down {
        return Err(Error::Inconclusive(format!(
            "continuation found {n_up} upward and {n_down} downward crossings"
        )));
    }
    let mut staircase = Vec::with_capacity(mu_grid.len());
    let mut level = 0i64;
    let mut next = 0;
    for &mu in mu_grid {
        while next < events.len() && events[next].mu <= mu {
            level += match events[next].direction {
                CrossingDirection::Down => 1,
                CrossingDirection::Up => -1,
            };
            next += 1;
        }
        staircase.push((mu, PI * level as f64));
    }
    Ok(ContinuationReport {
        lambda,
        mu_grid: mu_grid.to_vec(),
        a_samples: samples.iter().map(|s| s.a).collect(),
        rho,
        events,
        n_down,
        n_up,
        n: n_down - n_up,
        staircase,
    })
}

fn refine(
    channel: &ChannelParams,
    potential: &PotentialModel,
    rho: f64,
    grid: &Arc<RadialGrid>,
    tol: f64,
    lo: (f64, f64),
    hi_mu: f64,
) -> Result<CrossingEvent> {
    let (mut a, da) = lo;
    let mut b = hi_mu;
    while b - a > CROSSING_RESOLUTION {
        let m = 0.5 * (a + b);
        let s = sample(channel, potential, m, rho, grid, tol)?;
        if s.d == 0.0 {
            a = m;
            b = m;
            break;
        }
        if s.d.signum() == da.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let sa = sample(channel, potential, a, rho, grid, tol)?;
    let sb = sample(channel, potential, b, rho, grid, tol)?;
    let direction = match (sa.a, sb.a) {
        (Some(x), Some(y)) if y < x => CrossingDirection::Down,
        (Some(x), Some(y)) if y > x => CrossingDirection::Up,
        _ => return Err(Error::AmbiguousCrossing { mu: 0.5 * (a + b) }),
    };
    Ok(CrossingEvent { mu: 0.5 * (a + b), bracket: (a, b), direction })
}
