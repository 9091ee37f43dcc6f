use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::model::EffectiveEquation;
use crate::radial::{integrate_irregular_test_mode, integrate_jost, integrate_regular, RadialGrid, RadialSolution};

/// Nodes where the Wronskian is a difference of terms larger than this
/// multiple of the expected value are left out of the audit: there the
/// subtraction, not the solutions, sets the error.
pub const CONDITION_LIMIT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WronskianPair {
    /// φ(λ, k, r) with φ(−λ, k, r); W = −2λ.
    PhiPhiMinus,
    /// f(λ, k, r) with f(λ, −k, r); W = 2ik.
    JostPlusMinusK,
}

impl WronskianPair {
    pub fn tag(self) -> &'static str {
        match self {
            WronskianPair::PhiPhiMinus => "phi-phi-minus",
            WronskianPair::JostPlusMinusK => "f-f-minus-k",
        }
    }
}

#[derive(Debug, Clone)]
pub struct WronskianReport {
    pub pair: WronskianPair,
    /// Audited nodes.
    pub r: Vec<f64>,
    /// W(r) at the audited nodes.
    pub values: Vec<C>,
    pub expected: C,
    /// max |W(r) − expected| over audited nodes.
    pub max_deviation: f64,
    /// Standard deviation of W over audited nodes.
    pub std_deviation: f64,
    /// Grid nodes skipped by the conditioning filter.
    pub excluded: usize,
    /// Relative tolerance on max_deviation / |expected|.
    pub tolerance: f64,
    pub passed: bool,
}

impl WronskianReport {
    pub fn relative_deviation(&self) -> f64 {
        self.max_deviation / self.expected.norm()
    }
}

/// W(r) = y₁y₂′ − y₂y₁′ at every grid node.
pub fn wronskian(y1: &RadialSolution, y2: &RadialSolution) -> Result<Vec<C>> {
    check_compatible(y1, y2)?;
    Ok(y1.y.iter().zip(&y1.dy).zip(y2.y.iter().zip(&y2.dy)).map(|((a, da), (b, db))| a * db - b * da).collect())
}

fn check_compatible(y1: &RadialSolution, y2: &RadialSolution) -> Result<()> {
    if !y1.same_grid(y2) {
        return Err(Error::InvalidInput("Wronskian of solutions on different grids".into()));
    }
    if y1.mu != y2.mu || (y1.k2 - y2.k2).norm() > 1e-14 * y1.k2.norm().max(1.0) {
        return Err(Error::InvalidInput("Wronskian of solutions of different equations".into()));
    }
    Ok(())
}

/// Compares W(r) with its expected constant on the well-conditioned nodes.
pub fn wronskian_report(
    pair: WronskianPair,
    y1: &RadialSolution,
    y2: &RadialSolution,
    expected: C,
    tolerance: f64,
) -> Result<WronskianReport> {
    let w = wronskian(y1, y2)?;
    let scale = expected.norm();
    if scale == 0.0 {
        return Err(Error::InvalidInput("expected Wronskian must be non-zero".into()));
    }
    let nodes = y1.grid.nodes();
    let mut r = Vec::new();
    let mut values = Vec::new();
    for i in 0..w.len() {
        let cond = ((y1.y[i] * y2.dy[i]).norm() + (y2.y[i] * y1.dy[i]).norm()) / scale;
        if cond <= CONDITION_LIMIT {
            r.push(nodes[i]);
            values.push(w[i]);
        }
    }
    let excluded = w.len() - values.len();
    if values.is_empty() {
        return Err(Error::Inconclusive("no well-conditioned nodes for the Wronskian audit".into()));
    }
    let max_deviation = values.iter().fold(0.0f64, |m, v| m.max((v - expected).norm()));
    let mean: C = values.iter().sum::<C>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / values.len() as f64;
    Ok(WronskianReport {
        pair,
        r,
        values,
        expected,
        max_deviation,
        std_deviation: var.sqrt(),
        excluded,
        tolerance,
        passed: max_deviation <= tolerance * scale,
    })
}

/// Audits W[φ(λ), φ(−λ)] = −2λ (needs 0 < Re λ < 1/2).
pub fn audit_phi_pair(eq: &EffectiveEquation, grid: &Arc<RadialGrid>, tol: f64, tolerance: f64) -> Result<WronskianReport> {
    let phi = integrate_regular(eq, grid, tol)?;
    let phi_minus = integrate_irregular_test_mode(eq, grid, tol)?;
    wronskian_report(WronskianPair::PhiPhiMinus, &phi, &phi_minus, -2.0 * eq.lambda, tolerance)
}

/// Audits W[f(λ, k), f(λ, −k)] = 2ik.
pub fn audit_jost_pair(
    eq: &EffectiveEquation,
    grid: &Arc<RadialGrid>,
    k: C,
    tol: f64,
    tolerance: f64,
) -> Result<WronskianReport> {
    let f_plus = integrate_jost(eq, grid, k, tol)?;
    let f_minus = integrate_jost(eq, grid, -k, tol)?;
    wronskian_report(WronskianPair::JostPlusMinusK, &f_plus, &f_minus, C::new(0.0, 2.0) * k, tolerance)
}
