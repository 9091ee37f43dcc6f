use crate::error::{Error, Result};
use crate::model::{ChannelParams, PotentialModel};
use crate::specfun::{bessel_i_k, log_derivative_exterior};

use super::matching::{interior, interior_grid, kappa_of};

/// Energy slopes of the interior and exterior log-derivatives at r0, by
/// centred differences and by their integral representations
///
/// ```text
/// dA_int/dE = −y(r0)⁻² ∫₀^{r0} y² dr,   dA_ext/dE = y(r0)⁻² ∫_{r0}^∞ y² dr.
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SturmSlopes {
    pub energy: f64,
    pub de: f64,
    pub interior_fd: f64,
    pub exterior_fd: f64,
    pub interior_quadrature: f64,
    pub exterior_quadrature: f64,
}

impl SturmSlopes {
    pub fn signs_hold(&self) -> bool {
        self.interior_fd < 0.0 && self.exterior_fd > 0.0
    }

    /// Largest relative gap between a finite-difference slope and its
    /// integral form.
    pub fn max_relative_gap(&self) -> f64 {
        let gi = (self.interior_fd - self.interior_quadrature).abs() / self.interior_quadrature.abs();
        let ge = (self.exterior_fd - self.exterior_quadrature).abs() / self.exterior_quadrature.abs();
        gi.max(ge)
    }
}

/// ∫_{r0}^∞ r K_λ(κr)² dr / (r0 K_λ(κr0)²), i.e. the exterior integral of
/// y² for y = √r K_λ(κr) normalised to y(r0) = 1.
pub fn exterior_square_integral(lambda: f64, kappa: f64, r0: f64) -> Result<f64> {
    if !(kappa > 0.0) || !(r0 > 0.0) {
        return Err(Error::InvalidInput("exterior integral needs kappa > 0 and r0 > 0".into()));
    }
    let x0 = kappa * r0;
    let k0 = bessel_i_k(lambda, x0)?.k.value;
    let f = |x: f64| -> Result<f64> {
        let kx = bessel_i_k(lambda, x)?.k.value;
        let ratio = kx / k0;
        Ok(x / x0 * ratio * ratio * (-2.0 * (x - x0)).exp())
    };
    // panels grow geometrically from x0 until they reach a fixed width
    let mut total = 0.0;
    let mut a = x0;
    let mut h = 0.05 * x0.min(1.0);
    while a - x0 < 40.0 {
        let b = a + h;
        total += gauss_legendre_8(&f, a, b)?;
        a = b;
        h = (h * 1.15).min(0.25);
    }
    Ok(total / kappa)
}

const GL8_X: [f64; 4] = [0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363];
const GL8_W: [f64; 4] = [0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

fn gauss_legendre_8<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..4 {
        s += GL8_W[i] * (f(c - h * GL8_X[i])? + f(c + h * GL8_X[i])?);
    }
    Ok(s * h)
}

/// Finite-difference slopes of A_int and A_ext at E (step dE) with the
/// integral forms for comparison. Fails with [`Error::BranchChange`] if a
/// node of y crosses r0 within [E − dE, E + dE].
pub fn sturm_liouville_check(
    channel: &ChannelParams,
    potential: &PotentialModel,
    e: f64,
    de: f64,
    tol: f64,
) -> Result<SturmSlopes> {
    let lambda = channel.spectral_lambda()?;
    if !(de > 0.0) || !(e + de < 0.0) {
        return Err(Error::InvalidInput(format!("need dE > 0 and E + dE < 0, got E={e}, dE={de}")));
    }
    let r0 = potential.r0;
    let grid = interior_grid(potential, e - de)?;
    let lo = interior(channel, potential, e - de, &grid, tol)?;
    let mid = interior(channel, potential, e, &grid, tol)?;
    let hi = interior(channel, potential, e + de, &grid, tol)?;
    // sign of the unscaled y(r0) flips when a node crosses the cutoff
    let sign = |s: &super::matching::Interior| s.solution.at_r0().0.re.signum();
    if sign(&lo) != sign(&mid) || sign(&mid) != sign(&hi) {
        return Err(Error::BranchChange);
    }
    let interior_fd = (hi.log_derivative()? - lo.log_derivative()?) / (2.0 * de);
    let a_ext = |en: f64| -> Result<f64> { log_derivative_exterior(lambda, kappa_of(en)?, r0) };
    let exterior_fd = (a_ext(e + de)? - a_ext(e - de)?) / (2.0 * de);

    let sol = &mid.solution;
    let y0 = sol.at_r0().0;
    let integral = sol.interior_square_integral();
    let interior_quadrature = -(integral / (y0 * y0)).re;
    let exterior_quadrature = exterior_square_integral(lambda, kappa_of(e)?, r0)?;
    Ok(SturmSlopes { energy: e, de, interior_fd, exterior_fd, interior_quadrature, exterior_quadrature })
}
