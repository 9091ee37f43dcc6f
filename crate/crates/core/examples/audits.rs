//! Wronskian, conjugation and slope checks on a Gaussian well.
use std::sync::Arc;

use num_complex::Complex64 as C;
use qws::model::*;
use qws::radial::RadialGrid;
use qws::scattering::{audit_jost_pair, audit_phi_pair, hermiticity_residual, HermiticityKind};
use qws::spectral::sturm_liouville_check;

fn main() -> qws::Result<()> {
    let potential = PotentialModel::new(LocalPotential::Gaussian { depth: 5.0, width: 0.5 }, 1.5)?;
    let grid = Arc::new(RadialGrid::new(1.5, 3.0, 800, 100)?);

    let eq = effective_equation(&ChannelParams::new(2.5, 0.0), &potential, EnergyValue::from_k(1.2))?;
    let w = audit_phi_pair(&eq, &grid, 1e-12, 1e-8)?;
    println!("W[φ(λ), φ(-λ)]: max deviation {:.2e}, passed {}", w.relative_deviation(), w.passed);

    let eq = effective_equation(&ChannelParams::new(3.0, 1.0), &potential, EnergyValue::from_k(1.2))?;
    let w = audit_jost_pair(&eq, &grid, C::new(1.2, 0.0), 1e-12, 1e-8)?;
    println!("W[f(k), f(-k)]:  max deviation {:.2e}, passed {}", w.relative_deviation(), w.passed);

    let h = hermiticity_residual(HermiticityKind::Jost, C::new(1.2, 0.3), C::new(0.8, 0.1), &potential, &grid, 1e-12)?;
    println!("conjugation of f at complex (λ, k): {:.2e}", h.relative);

    let s = sturm_liouville_check(&ChannelParams::new(3.0, 0.0), &potential, -1.0, 1e-6, 1e-12)?;
    println!(
        "dA/dE at E=-1: interior {:+.8} (integral {:+.8}), exterior {:+.8} (integral {:+.8})",
        s.interior_fd, s.interior_quadrature, s.exterior_fd, s.exterior_quadrature
    );
    Ok(())
}
