//! Modified Bessel functions I_ν, K_ν of real order and positive argument.
//!
//! Values are returned in exponentially scaled form so that x up to 1e3 never
//! overflows: I_ν(x) = mantissa·e^{x}, K_ν(x) = mantissa·e^{-x}.

use std::f64::consts::PI;

use serde::Serialize;

use super::bessel::{check_order, BesselEval, Method, EPS, FPMIN, MAXIT};
use super::gamma::temme_gammas;
use crate::error::{Error, Result};

const XMIN: f64 = 2.0;
const RESCALE_AT: f64 = 1e250;

/// A value/derivative pair carrying a separate exponential factor:
/// f(x) = value·e^{exponent}, f′(x) = derivative·e^{exponent}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledEval {
    pub value: f64,
    pub derivative: f64,
    pub exponent: f64,
    pub est_error: f64,
    pub method: Method,
}

impl ScaledEval {
    /// Unscaled value and derivative, or a range error if e^{exponent}
    /// pushes them outside the double range.
    pub fn unscaled(&self) -> Result<BesselEval> {
        let s = self.exponent.exp();
        let value = self.value * s;
        let derivative = self.derivative * s;
        if !value.is_finite() || !derivative.is_finite() || (value == 0.0 && self.value != 0.0) {
            return Err(Error::Range {
                function: "modified_bessel",
                nu: f64::NAN,
                x: self.exponent.abs(),
                reason: "unscaled value outside double range",
            });
        }
        Ok(BesselEval { value, derivative, est_error: self.est_error * s, method: self.method })
    }

    /// f′/f, independent of the scale factor.
    pub fn log_derivative(&self) -> f64 {
        self.derivative / self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedPair {
    /// I_ν scaled by e^{-x} (exponent = +x).
    pub i: ScaledEval,
    /// K_ν scaled by e^{+x} (exponent = −x).
    pub k: ScaledEval,
}

/// I_ν, K_ν and their derivatives.
pub fn bessel_i_k(nu: f64, x: f64) -> Result<ModifiedPair> {
    check_order("bessel_i_k", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range { function: "bessel_i_k", nu, x, reason: "K singular at x = 0" });
    }
    let raw = ik_raw(nu, x);
    if [raw.i, raw.ip, raw.k, raw.kp].iter().any(|v| !v.is_finite()) {
        return Err(Error::Range { function: "bessel_i_k", nu, x, reason: "overflow" });
    }
    if raw.i.abs() < f64::MIN_POSITIVE {
        return Err(Error::Range { function: "bessel_i_k", nu, x, reason: "underflow" });
    }
    let steps = 8.0 + 2.0 * raw.recurrence_steps as f64;
    Ok(ModifiedPair {
        i: ScaledEval {
            value: raw.i,
            derivative: raw.ip,
            exponent: x,
            est_error: EPS * steps * raw.i.abs(),
            method: raw.method,
        },
        k: ScaledEval {
            value: raw.k,
            derivative: raw.kp,
            exponent: -x,
            est_error: EPS * steps * raw.k.abs(),
            method: raw.method,
        },
    })
}

/// K′_ν(x)/K_ν(x) without forming K itself, so it stays finite where K_ν
/// overflows (large ν, tiny x).
pub fn bessel_k_log_derivative(nu: f64, x: f64) -> Result<f64> {
    check_order("bessel_k_log_derivative", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range {
            function: "bessel_k_log_derivative",
            nu,
            x,
            reason: "singular at x = 0",
        });
    }
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let (kmu, kmu1) = k_reduced_scaled(xmu, x);
    // t = K_{μ+i+1}/K_{μ+i}; every term positive, so no cancellation.
    let mut t = kmu1 / kmu;
    for i in 1..=nl {
        t = (2.0 * (xmu + i as f64)) / x + 1.0 / t;
    }
    Ok(nu / x - t)
}

/// K_{ν−1}(x)/K_ν(x) by upward ratio recurrence. Near x = 0 this is the
/// small correction term of the exterior log-derivative, so it is formed
/// directly rather than from K′/K.
pub fn bessel_k_ratio_lower(nu: f64, x: f64) -> Result<f64> {
    check_order("bessel_k_ratio_lower", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range { function: "bessel_k_ratio_lower", nu, x, reason: "singular at x = 0" });
    }
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let (kmu, kmu1) = k_reduced_scaled(xmu, x);
    let mut t = kmu1 / kmu;
    if nl == 0 {
        // K_{ν−1} = K_{ν+1} − (2ν/x) K_ν
        return Ok(t - 2.0 * nu / x);
    }
    for i in 1..nl {
        t = (2.0 * (xmu + i as f64)) / x + 1.0 / t;
    }
    Ok(1.0 / t)
}

/// I_{ν+1}(x)/I_ν(x) from its continued fraction (modified Lentz).
pub fn bessel_i_ratio_upper(nu: f64, x: f64) -> Result<f64> {
    check_order("bessel_i_ratio_upper", nu, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut f = FPMIN;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..MAXIT {
        let b = 2.0 * (nu + j as f64) / x;
        d += b;
        d = if d == 0.0 { 1.0 / FPMIN } else { 1.0 / d };
        c = b + 1.0 / c;
        if c == 0.0 {
            c = FPMIN;
        }
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(f);
        }
    }
    Err(Error::Range { function: "bessel_i_ratio_upper", nu, x, reason: "continued fraction did not converge" })
}

/// I′_ν(x)/I_ν(x) from the continued fraction alone.
pub fn bessel_i_log_derivative(nu: f64, x: f64) -> Result<f64> {
    check_order("bessel_i_log_derivative", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range {
            function: "bessel_i_log_derivative",
            nu,
            x,
            reason: "singular at x = 0",
        });
    }
    Ok(cf1_i(nu, x))
}

fn cf1_i(xnu: f64, x: f64) -> f64 {
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// (K_μ, K_{μ+1}) scaled by e^{x}, |μ| ≤ 1/2.
fn k_reduced_scaled(xmu: f64, x: f64) -> (f64, f64) {
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let d = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let scale = x.exp();
        (sum * scale, sum1 * xi2 * scale)
    } else {
        // Steed's CF2 for K (Temme's normalisation), e^{-x} left out.
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        let h = a1 * h;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (xmu + x + 0.5 - h) * xi;
        (kmu, k1)
    }
}

pub(crate) struct IkRaw {
    pub i: f64,
    pub ip: f64,
    pub k: f64,
    pub kp: f64,
    pub method: Method,
    pub recurrence_steps: usize,
}

/// Scaled I_ν·e^{-x}, K_ν·e^{x} and derivatives; assumes ν ≥ 0, x > 0.
pub(crate) fn ik_raw(xnu: f64, x: f64) -> IkRaw {
    let nl = (xnu + 0.5) as usize;
    let xmu = xnu - nl as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let h = cf1_i(xnu, x);
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut rip1 = ripl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > RESCALE_AT || ripl.abs() > RESCALE_AT {
            ril /= RESCALE_AT;
            ripl /= RESCALE_AT;
            ril1 /= RESCALE_AT;
            rip1 /= RESCALE_AT;
        }
    }
    let f = ripl / ril;

    let (mut rkmu, mut rk1) = k_reduced_scaled(xmu, x);
    let rkmup = xmu * xi * rkmu - rk1;
    // Wronskian I K' - I' K = -1/x; with K scaled by e^{x}, I comes out
    // scaled by e^{-x}.
    let rimu = xi / (f * rkmu - rkmup);
    let ri = (rimu * ril1) / ril;
    let rip = (rimu * rip1) / ril;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    IkRaw {
        i: ri,
        ip: rip,
        k: rkmu,
        kp: xnu * xi * rkmu - rk1,
        method: if x < XMIN { Method::TemmeSeries } else { Method::SteedFraction },
        recurrence_steps: nl,
    }
}
