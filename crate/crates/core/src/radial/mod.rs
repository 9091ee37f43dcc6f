//! Radial ODE engine: grids, adaptive integration, regular/irregular/Jost
//! solutions and the separable-kernel solve.

mod green;
mod grid;
mod rk;
mod solve;

pub use green::{green_identity_residual, GreenResidual};
pub use grid::{RadialGrid, TailRule, R_MIN_FACTOR};
pub use solve::{
    integrate_irregular_test_mode, integrate_jost, integrate_regular, solve_nonlocal, solve_regular,
    NonlocalData, Normalization, RadialSolution, DEGENERACY_THRESHOLD, MAX_RANK,
};
