use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default ratio r_min / r0.
pub const R_MIN_FACTOR: f64 = 1e-6;

/// Geometric node spacing ratio near the origin.
const GEOMETRIC_RATIO: f64 = 1.08;

/// Radial nodes from r_min to r_max with r0 as an exact node, plus
/// quadrature weights for integrals over [r_min, r0].
///
/// Near the origin the nodes grow geometrically until their spacing reaches
/// the uniform interior step, so power-law integrands r^a are resolved
/// without oversampling the bulk.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    r0_index: usize,
    weights: Vec<f64>,
}

/// How the [0, r_min] piece of an interior integral is estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    /// Integrand ∝ r^a on [0, r_min].
    PowerLaw(f64),
    /// Quadratic through the first three nodes, extrapolated to 0.
    Quadratic,
}

impl RadialGrid {
    /// Interior grid with about `n_inner` uniform steps across [0, r0] and
    /// `n_outer` uniform steps across [r0, r_max].
    pub fn new(r0: f64, r_max: f64, n_inner: usize, n_outer: usize) -> Result<Self> {
        Self::with_r_min(R_MIN_FACTOR * r0, r0, r_max, n_inner, n_outer)
    }

    pub fn with_r_min(r_min: f64, r0: f64, r_max: f64, n_inner: usize, n_outer: usize) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidInput(format!("grid: r0 must be positive, got {r0}")));
        }
        if !(r_min > 0.0 && r_min < r0) {
            return Err(Error::InvalidInput(format!("grid: need 0 < r_min < r0, got r_min={r_min}")));
        }
        if !(r_max >= r0) {
            return Err(Error::InvalidInput(format!("grid: r_max={r_max} must be >= r0={r0}")));
        }
        if n_inner < 2 {
            return Err(Error::InvalidInput("grid: need at least 2 interior steps".into()));
        }
        let h = r0 / n_inner as f64;
        let mut nodes = vec![r_min];
        let mut r = r_min;
        while r * (GEOMETRIC_RATIO - 1.0) < h && r * GEOMETRIC_RATIO < r0 - h {
            r *= GEOMETRIC_RATIO;
            nodes.push(r);
        }
        let m = ((r0 - r) / h).ceil().max(1.0) as usize;
        let step = (r0 - r) / m as f64;
        for i in 1..m {
            nodes.push(r + step * i as f64);
        }
        nodes.push(r0);
        let r0_index = nodes.len() - 1;
        if r_max > r0 && n_outer > 0 {
            let step = (r_max - r0) / n_outer as f64;
            for i in 1..n_outer {
                nodes.push(r0 + step * i as f64);
            }
            nodes.push(r_max);
        }
        Ok(Self::from_parts(nodes, r0_index))
    }

    /// Minimal grid for shooting: r_min, r0 and two exterior nodes.
    pub fn shooting(r0: f64) -> Self {
        Self::from_parts(vec![R_MIN_FACTOR * r0, r0, 1.25 * r0, 1.5 * r0], 1)
    }

    /// Arbitrary strictly increasing nodes, `r0_index` marking the cutoff.
    pub fn from_nodes(nodes: Vec<f64>, r0_index: usize) -> Result<Self> {
        if nodes.len() < 2 || r0_index >= nodes.len() || r0_index == 0 {
            return Err(Error::InvalidInput("grid: need >= 2 nodes and 0 < r0_index < len".into()));
        }
        if !(nodes[0] > 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("grid: nodes must be positive and strictly increasing".into()));
        }
        Ok(Self::from_parts(nodes, r0_index))
    }

    fn from_parts(nodes: Vec<f64>, r0_index: usize) -> Self {
        let weights = simpson_weights(&nodes[..=r0_index]);
        Self { nodes, r0_index, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r0(&self) -> f64 {
        self.nodes[self.r0_index]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().expect("grid is never empty")
    }

    pub fn r0_index(&self) -> usize {
        self.r0_index
    }

    /// Nodes in [r_min, r0].
    pub fn interior(&self) -> &[f64] {
        &self.nodes[..=self.r0_index]
    }

    /// ∫₀^{r0} f(r) dr from samples at the interior nodes (extra samples
    /// beyond r0 are ignored).
    pub fn integrate_interior(&self, f: &[Complex64], tail: TailRule) -> Complex64 {
        debug_assert!(f.len() > self.r0_index);
        let body: Complex64 = self.weights.iter().zip(f).map(|(w, v)| v * *w).sum();
        body + self.tail(f, tail)
    }

    /// Real-valued convenience wrapper.
    pub fn integrate_interior_real(&self, f: &[f64], tail: TailRule) -> f64 {
        let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.integrate_interior(&c, tail).re
    }

    fn tail(&self, f: &[Complex64], tail: TailRule) -> Complex64 {
        let r_min = self.nodes[0];
        match tail {
            TailRule::PowerLaw(a) => f[0] * (r_min / (a + 1.0)),
            TailRule::Quadratic => {
                if self.r0_index < 2 {
                    return f[0] * r_min;
                }
                let w = lagrange_weights(self.nodes[0], self.nodes[1], self.nodes[2], 0.0, r_min);
                f[0] * w[0] + f[1] * w[1] + f[2] * w[2]
            }
        }
    }
}

/// Composite Simpson weights on arbitrary spacing; a trailing odd interval
/// uses the quadratic through its last three nodes.
fn simpson_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    if n == 2 {
        let h = x[1] - x[0];
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return w;
    }
    let intervals = n - 1;
    let paired = intervals - intervals % 2;
    let mut i = 0;
    while i < paired {
        let h1 = x[i + 1] - x[i];
        let h2 = x[i + 2] - x[i + 1];
        let s = (h1 + h2) / 6.0;
        w[i] += s * (2.0 - h2 / h1);
        w[i + 1] += s * (h1 + h2) * (h1 + h2) / (h1 * h2);
        w[i + 2] += s * (2.0 - h1 / h2);
        i += 2;
    }
    if paired < intervals {
        let lw = lagrange_weights(x[n - 3], x[n - 2], x[n - 1], x[n - 2], x[n - 1]);
        w[n - 3] += lw[0];
        w[n - 2] += lw[1];
        w[n - 1] += lw[2];
    }
    w
}

/// ∫_a^b of the quadratic interpolant through (x0, x1, x2), as weights on
/// the three samples. Two-point Gauss–Legendre is exact for it.
fn lagrange_weights(x0: f64, x1: f64, x2: f64, a: f64, b: f64) -> [f64; 3] {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let g = half / 3f64.sqrt();
    let mut w = [0.0; 3];
    for t in [mid - g, mid + g] {
        w[0] += half * (t - x1) * (t - x2) / ((x0 - x1) * (x0 - x2));
        w[1] += half * (t - x0) * (t - x2) / ((x1 - x0) * (x1 - x2));
        w[2] += half * (t - x0) * (t - x1) / ((x2 - x0) * (x2 - x1));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: f64) -> f64 {
        1.0 - 2.0 * r + 3.5 * r * r
    }

    fn poly_integral(b: f64) -> f64 {
        b - b * b + 3.5 * b * b * b / 3.0
    }

    #[test]
    fn nodes_hit_r0_and_increase() {
        let g = RadialGrid::new(2.0, 3.0, 400, 20).unwrap();
        assert_eq!(g.r0(), 2.0);
        assert_eq!(g.r_max(), 3.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!((g.r_min() - 2e-6).abs() < 1e-20);
    }

    #[test]
    fn quadratics_integrate_exactly() {
        for &(r0, n) in &[(1.0, 400), (2.5, 37), (0.3, 2001)] {
            let g = RadialGrid::new(r0, r0, n, 0).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|&r| poly(r)).collect();
            let got = g.integrate_interior_real(&f, TailRule::Quadratic);
            assert!((got - poly_integral(r0)).abs() < 1e-13, "r0={r0} n={n}");
        }
    }

    #[test]
    fn power_law_integrand_converges() {
        let g = RadialGrid::new(1.0, 1.0, 2000, 0).unwrap();
        let a = 1.6;
        let f: Vec<f64> = g.nodes().iter().map(|&r| r.powf(a)).collect();
        let got = g.integrate_interior_real(&f, TailRule::PowerLaw(a));
        assert!((got - 1.0 / (a + 1.0)).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::new(-1.0, 2.0, 10, 2).is_err());
        assert!(RadialGrid::new(1.0, 0.5, 10, 2).is_err());
        assert!(RadialGrid::from_nodes(vec![0.1, 0.1, 0.3], 1).is_err());
    }
}
