//! Ordinary Bessel functions J_ν, Y_ν of real order ν ≥ 0 and positive argument.
//!
//! Both functions and their derivatives come out of a single evaluation:
//! Lentz's continued fraction for J′_ν/J_ν, downward recurrence to a reduced
//! order |μ| ≤ 1/2, then either Temme's series (x < 2) or Steed's complex
//! continued fraction (x ≥ 2) for Y_μ, with the cylinder Wronskian closing
//! the system. Integer and non-integer orders share the same path, so there is
//! no sin(νπ) division anywhere.

use std::f64::consts::PI;

use serde::Serialize;

use super::gamma::temme_gammas;
use crate::error::{Error, Result};

pub(crate) const EPS: f64 = 1e-16;
pub(crate) const FPMIN: f64 = 1e-300;
pub(crate) const MAXIT: usize = 100_000;
const XMIN: f64 = 2.0;
const RESCALE_AT: f64 = 1e250;

/// Largest order accepted by the Bessel routines.
pub const NU_MAX: f64 = 50.0;
/// Largest argument accepted by the Bessel routines.
pub const X_MAX: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Limit value at x = 0.
    Limit,
    /// Temme's series for the reduced order (small argument).
    TemmeSeries,
    /// Steed's continued fraction for the reduced order (large argument).
    SteedFraction,
}

/// One evaluated function: value, first derivative, and an error estimate
/// (absolute, on the value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselEval {
    pub value: f64,
    pub derivative: f64,
    pub est_error: f64,
    pub method: Method,
}

/// Both cylinder functions at the same (ν, x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPair {
    pub j: BesselEval,
    pub y: BesselEval,
}

pub(crate) fn check_order(function: &'static str, nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(Error::Range { function, nu, x, reason: "non-finite input" });
    }
    if nu < 0.0 {
        return Err(Error::Range { function, nu, x, reason: "negative order" });
    }
    if nu > NU_MAX {
        return Err(Error::Range { function, nu, x, reason: "order above 50" });
    }
    if x > X_MAX {
        return Err(Error::Range { function, nu, x, reason: "argument above 1e3" });
    }
    if x < 0.0 {
        return Err(Error::Range { function, nu, x, reason: "negative argument" });
    }
    Ok(())
}

/// J_ν(x) and J′_ν(x). At x = 0 the limit is returned.
pub fn bessel_j(nu: f64, x: f64) -> Result<BesselEval> {
    check_order("bessel_j", nu, x)?;
    if x == 0.0 {
        let value = if nu == 0.0 { 1.0 } else { 0.0 };
        let derivative = if nu == 1.0 {
            0.5
        } else if nu > 1.0 || nu == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        return Ok(BesselEval { value, derivative, est_error: 0.0, method: Method::Limit });
    }
    Ok(bessel_jy(nu, x)?.j)
}

/// Y_ν(x) and Y′_ν(x) (the Neumann function N_ν).
pub fn bessel_y(nu: f64, x: f64) -> Result<BesselEval> {
    check_order("bessel_y", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range { function: "bessel_y", nu, x, reason: "singular at x = 0" });
    }
    Ok(bessel_jy(nu, x)?.y)
}

/// J_ν, Y_ν and their derivatives in one pass.
pub fn bessel_jy(nu: f64, x: f64) -> Result<CylinderPair> {
    check_order("bessel_jy", nu, x)?;
    if x == 0.0 {
        return Err(Error::Range { function: "bessel_jy", nu, x, reason: "Y singular at x = 0" });
    }
    let raw = jy_raw(nu, x);
    if [raw.j, raw.jp, raw.y, raw.yp].iter().any(|v| !v.is_finite()) {
        return Err(Error::Range { function: "bessel_jy", nu, x, reason: "overflow" });
    }
    if raw.j.abs() < f64::MIN_POSITIVE {
        return Err(Error::Range { function: "bessel_jy", nu, x, reason: "underflow" });
    }
    // Rounding relative to the modulus sqrt(J^2 + Y^2), inflated by the
    // number of recurrence steps; near a zero of J this is an absolute bound.
    let modulus = raw.j.hypot(raw.y);
    let steps = 8.0 + 2.0 * raw.recurrence_steps as f64;
    let j_err = EPS * steps * raw.j.abs().max(1e-3 * modulus.min(1.0 / x.sqrt()));
    let y_err = EPS * steps * raw.y.abs().max(1e-3 * modulus.min(1.0 / x.sqrt()));
    Ok(CylinderPair {
        j: BesselEval { value: raw.j, derivative: raw.jp, est_error: j_err, method: raw.method },
        y: BesselEval { value: raw.y, derivative: raw.yp, est_error: y_err, method: raw.method },
    })
}

pub(crate) struct JyRaw {
    pub j: f64,
    pub jp: f64,
    pub y: f64,
    pub yp: f64,
    pub method: Method,
    pub recurrence_steps: usize,
}

/// Core evaluation; assumes ν ≥ 0 and x > 0.
pub(crate) fn jy_raw(xnu: f64, x: f64) -> JyRaw {
    let nl = if x < XMIN {
        (xnu + 0.5) as usize
    } else {
        (xnu - x + 1.5).max(0.0) as usize
    };
    let xmu = xnu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν/J_ν by modified Lentz.
    let mut isign = 1.0;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // Downward recurrence from ν to μ = ν - nl, unnormalised.
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE_AT || rjpl.abs() > RESCALE_AT {
            rjl /= RESCALE_AT;
            rjpl /= RESCALE_AT;
            rjl1 /= RESCALE_AT;
            rjp1 /= RESCALE_AT;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, mut ry1, method);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
        method = Method::TemmeSeries;
    } else {
        // CF2: p + iq = (J'_μ + iY'_μ)/(J_μ + iY_μ), Steed's algorithm.
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            let fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            let temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mut jm = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            jm = -jm;
        }
        rjmu = jm;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
        method = Method::SteedFraction;
    }

    let fact = rjmu / rjl;
    let rj = rjl1 * fact;
    let rjp = rjp1 * fact;
    let mut rymu = rymu;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    JyRaw {
        j: rj,
        jp: rjp,
        y: rymu,
        yp: xnu * xi * rymu - ry1,
        method,
        recurrence_steps: nl,
    }
}
