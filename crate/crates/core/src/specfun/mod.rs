//! Special functions of real order: Γ, J_ν, Y_ν, I_ν, K_ν and the threshold
//! logarithmic derivatives built from them.

mod bessel;
mod gamma;
mod modified;

pub use bessel::{bessel_j, bessel_jy, bessel_y, BesselEval, CylinderPair, Method, NU_MAX, X_MAX};
pub use gamma::{gamma, ln_gamma};
pub use modified::{
    bessel_i_k, bessel_i_log_derivative, bessel_i_ratio_upper, bessel_k_log_derivative,
    bessel_k_ratio_lower, ModifiedPair, ScaledEval,
};

use crate::error::{Error, Result};

/// d/dr log[√r·K_λ(κr)] at r = r0: the log-derivative of the decaying
/// solution outside the cutoff for E = −κ².
///
/// H⁽¹⁾_λ(iκr) is proportional to K_λ(κr), so the exterior bound-state
/// solution is handled entirely in real arithmetic. Evaluated as
/// (1/2 − λ)/r0 − κ K_{λ−1}/K_λ, which returns the threshold value exactly
/// at κ = 0 and approaches it without cancellation.
pub fn log_derivative_exterior(lambda: f64, kappa: f64, r0: f64) -> Result<f64> {
    check_matching_args("log_derivative_exterior", lambda, kappa, r0)?;
    if kappa == 0.0 {
        return Ok((0.5 - lambda) / r0);
    }
    Ok((0.5 - lambda) / r0 - kappa * bessel_k_ratio_lower(lambda, kappa * r0)?)
}

/// d/dr log[√r·I_λ(κr)] at r = r0: the free regular solution at E = −κ²
/// (J_λ(iκr) ∝ I_λ(κr)), as (λ + 1/2)/r0 + κ I_{λ+1}/I_λ.
pub fn log_derivative_interior_free(lambda: f64, kappa: f64, r0: f64) -> Result<f64> {
    check_matching_args("log_derivative_interior_free", lambda, kappa, r0)?;
    if kappa == 0.0 {
        return Ok((0.5 + lambda) / r0);
    }
    Ok((0.5 + lambda) / r0 + kappa * bessel_i_ratio_upper(lambda, kappa * r0)?)
}

fn check_matching_args(function: &'static str, lambda: f64, kappa: f64, r0: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!("{function}: lambda must be positive, got {lambda}")));
    }
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidInput(format!("{function}: kappa must be >= 0, got {kappa}")));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::InvalidInput(format!("{function}: r0 must be positive, got {r0}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_threshold_and_deep_limits() {
        assert_eq!(log_derivative_exterior(1.5, 0.0, 2.0).unwrap(), -0.5);
        let near = log_derivative_exterior(1.5, 1e-7, 2.0).unwrap();
        assert!((near + 0.5).abs() < 1e-10);
        let deep = log_derivative_exterior(1.5, 200.0, 1.0).unwrap();
        assert!((deep / -200.0 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn exterior_half_order_is_minus_kappa() {
        for &kappa in &[1e-3, 0.4, 3.0, 50.0] {
            let v = log_derivative_exterior(0.5, kappa, 1.3).unwrap();
            assert!((v + kappa).abs() < 1e-12 * kappa.max(1.0), "kappa={kappa}");
        }
    }

    #[test]
    fn interior_free_threshold() {
        assert_eq!(log_derivative_interior_free(2.0, 0.0, 1.0).unwrap(), 2.5);
        let v = log_derivative_interior_free(2.0, 1e-6, 1.0).unwrap();
        assert!((v - 2.5).abs() < 1e-10);
    }

    #[test]
    fn log_derivative_forms_agree() {
        for &(nu, x) in &[(0.3, 0.2), (0.5, 1.0), (1.5, 0.01), (2.7, 3.0), (10.0, 25.0)] {
            let direct = 0.5 / x + bessel_k_log_derivative(nu, x).unwrap();
            let ratio = (0.5 - nu) / x - bessel_k_ratio_lower(nu, x).unwrap();
            assert!((direct - ratio).abs() < 1e-11 * direct.abs().max(1.0), "K nu={nu} x={x}");
            let direct = 0.5 / x + bessel_i_log_derivative(nu, x).unwrap();
            let ratio = (0.5 + nu) / x + bessel_i_ratio_upper(nu, x).unwrap();
            assert!((direct - ratio).abs() < 1e-11 * direct.abs().max(1.0), "I nu={nu} x={x}");
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(log_derivative_exterior(0.0, 1.0, 1.0).is_err());
        assert!(log_derivative_exterior(1.0, -1.0, 1.0).is_err());
    }
}
