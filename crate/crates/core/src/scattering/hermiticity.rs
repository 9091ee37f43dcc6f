use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::model::{effective_equation_k2, ChannelParams, PotentialModel};
use crate::radial::{integrate_jost, integrate_regular, RadialGrid, RadialSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermiticityKind {
    /// [φ(λ, k)]* = φ(λ*, k*)
    Phi,
    /// [f(λ, k)]* = f(λ*, −k*)
    Jost,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiticityResidual {
    /// max over the grid of |lhs − rhs|.
    pub absolute: f64,
    /// `absolute` divided by max |solution|.
    pub relative: f64,
}

/// Checks the conjugation symmetry of φ or f for a real local potential.
pub fn hermiticity_residual(
    kind: HermiticityKind,
    lambda: C,
    k: C,
    potential: &PotentialModel,
    grid: &Arc<RadialGrid>,
    tol: f64,
) -> Result<HermiticityResidual> {
    if potential.has_kernel() && potential.mu != 0.0 {
        return Err(Error::InvalidInput(
            "Hermiticity audit covers local potentials; kernels need real lambda".into(),
        ));
    }
    let solve = |lam: C, kk: C| -> Result<RadialSolution> {
        let eq = effective_equation_k2(&ChannelParams::from_lambda(lam), potential, kk * kk)?;
        match kind {
            HermiticityKind::Phi => integrate_regular(&eq, grid, tol),
            HermiticityKind::Jost => integrate_jost(&eq, grid, kk, tol),
        }
    };
    let lhs = solve(lambda, k)?;
    let rhs = match kind {
        HermiticityKind::Phi => solve(lambda.conj(), k.conj())?,
        HermiticityKind::Jost => solve(lambda.conj(), -k.conj())?,
    };
    let absolute = lhs.y.iter().zip(&rhs.y).fold(0.0f64, |m, (a, b)| m.max((a.conj() - b).norm()));
    let scale = lhs.max_abs().max(f64::MIN_POSITIVE);
    Ok(HermiticityResidual { absolute, relative: absolute / scale })
}
