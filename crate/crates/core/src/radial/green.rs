use num_complex::Complex64 as C;

use super::grid::TailRule;
use super::solve::RadialSolution;
use crate::error::{Error, Result};

/// Terms of the Green identity
/// W(y₁, y₂)(r0) + (k₂² − k₁²) ∫₀^{r0} y₁y₂ dr = 0
/// for two regular solutions at energies k₁², k₂².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenResidual {
    pub wronskian: C,
    pub integral_term: C,
    /// |W + integral term|.
    pub residual: f64,
    /// Residual divided by max(|W|, |integral term|, tiny).
    pub relative: f64,
}

/// Evaluates the Green identity on two regular solutions sharing a grid.
/// Holds for local potentials and symmetric kernels; an antisymmetric
/// coupling leaves a non-zero residual.
pub fn green_identity_residual(y1: &RadialSolution, y2: &RadialSolution) -> Result<GreenResidual> {
    if !y1.same_grid(y2) {
        return Err(Error::InvalidInput("Green identity needs both solutions on one grid".into()));
    }
    let i0 = y1.r0_index();
    let w = y1.y[i0] * y2.dy[i0] - y1.dy[i0] * y2.y[i0];
    let prod: Vec<C> = y1.y.iter().zip(&y2.y).map(|(a, b)| a * b).collect();
    let tail = TailRule::PowerLaw((y1.lambda + y2.lambda).re + 1.0);
    let integral = y1.grid.integrate_interior(&prod, tail);
    let term = (y2.k2 - y1.k2) * integral;
    let residual = (w + term).norm();
    let scale = w.norm().max(term.norm()).max(f64::MIN_POSITIVE);
    Ok(GreenResidual { wronskian: w, integral_term: term, residual, relative: residual / scale })
}
