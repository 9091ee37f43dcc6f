//! Regular solution of the reduced radial equation with a separable kernel.
use std::sync::Arc;

use qws::model::*;
use qws::radial::{solve_nonlocal, RadialGrid};

fn main() -> qws::Result<()> {
    // q = 3, l = 1 gives λ = 3/2
    let channel = ChannelParams::new(3.0, 1.0);
    let kernel = SeparableKernel::with_coupling(
        vec![KernelProfile::GaussianBump { center: 0.4, width: 0.15 }, KernelProfile::PolynomialBump { a: 2.0, b: 2.0 }],
        vec![vec![-5.0, 2.0], vec![2.0, -3.0]],
    )?;
    let potential = PotentialModel::with_kernel(LocalPotential::SquareWell { depth: 2.0 }, 1.0, kernel)?;
    let eq = effective_equation(&channel, &potential, EnergyValue::from_k(1.3))?;
    let grid = Arc::new(RadialGrid::new(1.0, 2.0, 200, 50)?);
    let sol = solve_nonlocal(&eq, &grid, 1e-11)?;
    if let Some(data) = &sol.nonlocal {
        println!("det(I - μCM) = {:.6}", data.det);
    }
    for (i, r) in grid.nodes().iter().enumerate().step_by(25) {
        println!("{r:.4e}  {:+.10e}", sol.y[i].re);
    }
    Ok(())
}
