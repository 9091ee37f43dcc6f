//! Dormand–Prince 5(4) with step-size control, stepping node to node.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Right-hand side y' = f(r, y). `interior` is true on intervals that end at
/// or before the cutoff, so coefficients can be taken as left limits there.
pub(crate) trait OdeRhs {
    fn eval(&self, r: f64, interior: bool, y: &[C], dy: &mut [C]);
}

impl<F: Fn(f64, bool, &[C], &mut [C])> OdeRhs for F {
    fn eval(&self, r: f64, interior: bool, y: &[C], dy: &mut [C]) {
        self(r, interior, y, dy)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Per-component absolute tolerances; overrides `atol` where given.
    pub atol_components: Option<Vec<f64>>,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(rtol: f64) -> Self {
        Self { rtol, atol: 1e-300, atol_components: None, max_steps: 2_000_000 }
    }

    /// Absolute floors for components that start at exactly zero and grow
    /// like a high power of the distance: pure relative control cannot
    /// step away from such a start.
    pub fn with_component_atol(mut self, atol: Vec<f64>) -> Self {
        self.atol_components = Some(atol);
        self
    }

    /// Integrates from `nodes[0]` (state `y0`) through every node in order,
    /// which may run in either direction. Returns the state at each node.
    /// Intervals lying entirely on or below `split` are flagged interior.
    pub fn integrate_nodes<F: OdeRhs>(
        &self,
        f: &F,
        y0: &[C],
        nodes: &[f64],
        split: f64,
    ) -> Result<Vec<Vec<C>>> {
        let n = y0.len();
        let mut out = Vec::with_capacity(nodes.len());
        out.push(y0.to_vec());
        if nodes.len() < 2 {
            return Ok(out);
        }
        let mut ws = Workspace::new(n);
        let mut y = y0.to_vec();
        let span = (nodes[nodes.len() - 1] - nodes[0]).abs();
        let mut h = (0.05 * nodes[0].abs()).max(1e-4 * span).min((nodes[1] - nodes[0]).abs());
        let mut steps = 0usize;
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            let interior = a.max(b) <= split;
            let dir = (b - a).signum();
            let mut r = a;
            f.eval(r, interior, &y, &mut ws.k[0]);
            loop {
                let remaining = (b - r).abs();
                if remaining <= 1e-15 * b.abs().max(1e-300) {
                    break;
                }
                let mut last = false;
                let mut hs = h;
                if hs >= remaining {
                    hs = remaining;
                    last = true;
                }
                let err = self.step(f, r, dir * hs, interior, &y, &mut ws);
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::TooManySteps { steps, r });
                }
                if err <= 1.0 {
                    r = if last { b } else { r + dir * hs };
                    std::mem::swap(&mut y, &mut ws.ynew);
                    // FSAL: stage 7 is the derivative at the new point.
                    let (first, rest) = ws.k.split_at_mut(6);
                    first[0].copy_from_slice(&rest[0]);
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if !last || fac < 1.0 {
                        h = hs * fac;
                    }
                } else {
                    let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    h = hs * fac;
                    if h < 1e-14 * r.abs().max(1e-300) {
                        return Err(Error::Stiffness { r });
                    }
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }

    /// One trial step; leaves the proposal in `ws.ynew` and returns the
    /// scaled error norm.
    fn step<F: OdeRhs>(&self, f: &F, r: f64, h: f64, interior: bool, y: &[C], ws: &mut Workspace) -> f64 {
        let n = y.len();
        let Workspace { k, tmp, ynew } = ws;
        for i in 0..n {
            tmp[i] = y[i] + k[0][i] * (h * A21);
        }
        f.eval(r + C2 * h, interior, tmp, &mut k[1]);
        for i in 0..n {
            tmp[i] = y[i] + (k[0][i] * A31 + k[1][i] * A32) * h;
        }
        f.eval(r + C3 * h, interior, tmp, &mut k[2]);
        for i in 0..n {
            tmp[i] = y[i] + (k[0][i] * A41 + k[1][i] * A42 + k[2][i] * A43) * h;
        }
        f.eval(r + C4 * h, interior, tmp, &mut k[3]);
        for i in 0..n {
            tmp[i] = y[i] + (k[0][i] * A51 + k[1][i] * A52 + k[2][i] * A53 + k[3][i] * A54) * h;
        }
        f.eval(r + C5 * h, interior, tmp, &mut k[4]);
        for i in 0..n {
            tmp[i] = y[i]
                + (k[0][i] * A61 + k[1][i] * A62 + k[2][i] * A63 + k[3][i] * A64 + k[4][i] * A65) * h;
        }
        f.eval(r + h, interior, tmp, &mut k[5]);
        for i in 0..n {
            ynew[i] = y[i]
                + (k[0][i] * A71 + k[2][i] * A73 + k[3][i] * A74 + k[4][i] * A75 + k[5][i] * A76) * h;
        }
        f.eval(r + h, interior, ynew, &mut k[6]);
        let mut acc = 0.0;
        for i in 0..n {
            let e = (k[0][i] * E1 + k[2][i] * E3 + k[3][i] * E4 + k[4][i] * E5 + k[5][i] * E6
                + k[6][i] * E7)
                * h;
            let atol = self.atol_components.as_ref().map_or(self.atol, |a| a[i].max(self.atol));
            let sc = atol + self.rtol * y[i].norm().max(ynew[i].norm());
            let q = e.norm() / sc;
            acc += q * q;
        }
        let err = (acc / n as f64).sqrt();
        if err.is_finite() {
            err
        } else {
            f64::INFINITY
        }
    }
}

struct Workspace {
    k: Vec<Vec<C>>,
    tmp: Vec<C>,
    ynew: Vec<C>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self { k: vec![vec![C::new(0.0, 0.0); n]; 7], tmp: vec![C::new(0.0, 0.0); n], ynew: vec![C::new(0.0, 0.0); n] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let f = |_r: f64, _i: bool, y: &[C], dy: &mut [C]| dy[0] = y[0];
        let out = Dopri5::new(1e-12).integrate_nodes(&f, &[C::new(1.0, 0.0)], &[0.0, 0.5, 1.0], 1.0).unwrap();
        assert!((out[2][0].re - 1f64.exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_backwards() {
        // y'' = -y from r = 3 back to 0, started on sin.
        let f = |_r: f64, _i: bool, y: &[C], dy: &mut [C]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let y0 = [C::new(3f64.sin(), 0.0), C::new(3f64.cos(), 0.0)];
        let out = Dopri5::new(1e-12).integrate_nodes(&f, &y0, &[3.0, 1.0, 0.25], 10.0).unwrap();
        assert!((out[1][0].re - 1f64.sin()).abs() < 1e-10);
        assert!((out[2][1].re - 0.25f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn fifth_order_convergence() {
        // Error at fixed tolerance ratio shrinks roughly like tol.
        let f = |r: f64, _i: bool, y: &[C], dy: &mut [C]| dy[0] = y[0] * r.cos();
        let exact = (2f64).sin().exp();
        let e1 = (Dopri5::new(1e-6).integrate_nodes(&f, &[C::new(1.0, 0.0)], &[0.0, 2.0], 2.0).unwrap()[1][0].re - exact).abs();
        let e2 = (Dopri5::new(1e-9).integrate_nodes(&f, &[C::new(1.0, 0.0)], &[0.0, 2.0], 2.0).unwrap()[1][0].re - exact).abs();
        assert!(e2 < e1 / 50.0, "e1={e1} e2={e2}");
    }
}
