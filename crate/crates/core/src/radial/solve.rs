use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

use super::grid::{RadialGrid, TailRule};
use super::rk::Dopri5;
use crate::error::{Error, Result};
use crate::model::EffectiveEquation;

/// Relative threshold on det(I − μCM) below which the kernel solve is refused.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Largest supported number of separable kernel terms.
pub const MAX_RANK: usize = 16;

/// How a solution is normalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// y(r) / r^{λ+1/2} → 1 as r → 0.
    OriginRegular,
    /// y(r) / r^{−λ+1/2} → 1 as r → 0 (the φ(−λ) partner, test mode only).
    OriginIrregular,
    /// e^{ikr} y(r) → 1 as r → ∞.
    Jost { k: C },
    /// Rescaled after matching to an exterior solution.
    MatchedPhysical,
}

/// Extra data of a non-local (separable kernel) solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalData {
    /// Superposition amplitudes aⱼ of the particular solutions.
    pub amplitudes: Vec<C>,
    /// det(I − μCM).
    pub det: C,
    /// Moments cᵢ(y) = ∫₀^{r0} gᵢ(r) r^p y(r) dr of the returned solution.
    pub moments: Vec<C>,
}

#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub grid: Arc<RadialGrid>,
    pub y: Vec<C>,
    pub dy: Vec<C>,
    pub normalization: Normalization,
    pub lambda: C,
    pub k2: C,
    pub mu: f64,
    pub nonlocal: Option<NonlocalData>,
}

impl RadialSolution {
    pub fn r0_index(&self) -> usize {
        self.grid.r0_index()
    }

    /// (y, y′) at the cutoff, taken from the interior side.
    pub fn at_r0(&self) -> (C, C) {
        let i = self.grid.r0_index();
        (self.y[i], self.dy[i])
    }

    /// Factor that makes the solution continuous through kernel
    /// degeneracies: det(I − μCM) for non-local solves, 1 otherwise.
    /// Multiplying (y, y′) by it gives a chart with no poles in E or μ.
    pub fn chart_scale(&self) -> C {
        self.nonlocal.as_ref().map_or(C::new(1.0, 0.0), |d| d.det)
    }

    /// Largest |y| on the grid.
    pub fn max_abs(&self) -> f64 {
        self.y.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// ∫₀^{r0} y² dr (no complex conjugation).
    pub fn interior_square_integral(&self) -> C {
        let f: Vec<C> = self.y.iter().map(|v| v * v).collect();
        self.grid.integrate_interior(&f, TailRule::PowerLaw(2.0 * self.lambda.re + 1.0))
    }

    pub fn same_grid(&self, other: &RadialSolution) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.nodes() == other.grid.nodes()
    }
}

/// Frobenius start y = r^{ν+1/2}(1 + a₁r + a₂r²) for the exponent branch ν
/// (ν = λ regular, ν = −λ irregular), using r·μV(r) ≈ v₋₁ + v₀r near 0.
fn frobenius_start(eq: &EffectiveEquation, nu: C, r: f64) -> (C, C) {
    let mu = eq.mu();
    let pot = &eq.potential;
    let (r1, r2) = (r, 2.0 * r);
    let w1 = r1 * mu * pot.local_value(crate::model::left_limit(r1, pot.r0));
    let w2 = r2 * mu * pot.local_value(crate::model::left_limit(r2, pot.r0));
    let v0 = (w2 - w1) / (r2 - r1);
    let vm1 = w1 - v0 * r1;
    let a1 = C::new(vm1, 0.0) / (1.0 + 2.0 * nu);
    let a2 = (a1 * vm1 + v0 - eq.k2) / (2.0 * (2.0 + 2.0 * nu));
    let s = nu + 0.5;
    let rs = C::new(r, 0.0).powc(s);
    let y = rs * (1.0 + a1 * r + a2 * r * r);
    let dy = rs / r * (s + (s + 1.0) * a1 * r + (s + 2.0) * a2 * r * r);
    (y, dy)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

/// Solution regular at the origin for a local equation, normalised so that
/// y/r^{λ+1/2} → 1. Continues past r0 with the free equation.
pub fn integrate_regular(eq: &EffectiveEquation, grid: &Arc<RadialGrid>, tol: f64) -> Result<RadialSolution> {
    if eq.has_active_kernel() {
        return Err(Error::InvalidInput(
            "integrate_regular handles local equations; use solve_nonlocal for kernels".into(),
        ));
    }
    if !(eq.lambda.re > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Re(lambda)={} <= 0: regular and irregular solutions are not separated",
            eq.lambda.re
        )));
    }
    check_grid(eq, grid)?;
    integrate_from_origin(eq, grid, tol, eq.lambda, Normalization::OriginRegular)
}

/// φ(−λ, k, r), the partner behaving as r^{−λ+1/2}. Only offered for
/// 0 < Re λ < 1/2, where both Frobenius exponents are integrable.
pub fn integrate_irregular_test_mode(
    eq: &EffectiveEquation,
    grid: &Arc<RadialGrid>,
    tol: f64,
) -> Result<RadialSolution> {
    if eq.has_active_kernel() {
        return Err(Error::InvalidInput("irregular partner only for local equations".into()));
    }
    if !(eq.lambda.re > 0.0 && eq.lambda.re < 0.5) {
        return Err(Error::InvalidInput(format!(
            "irregular partner requires 0 < Re(lambda) < 1/2, got {}",
            eq.lambda.re
        )));
    }
    check_grid(eq, grid)?;
    integrate_from_origin(eq, grid, tol, -eq.lambda, Normalization::OriginIrregular)
}

fn check_grid(eq: &EffectiveEquation, grid: &RadialGrid) -> Result<()> {
    if grid.r0() != eq.r0() {
        return Err(Error::InvalidInput(format!(
            "grid cutoff {} differs from the potential cutoff {}",
            grid.r0(),
            eq.r0()
        )));
    }
    Ok(())
}

fn integrate_from_origin(
    eq: &EffectiveEquation,
    grid: &Arc<RadialGrid>,
    tol: f64,
    nu: C,
    normalization: Normalization,
) -> Result<RadialSolution> {
    check_tol(tol)?;
    let (y0, dy0) = frobenius_start(eq, nu, grid.r_min());
    let rhs = |r: f64, interior: bool, s: &[C], ds: &mut [C]| {
        ds[0] = s[1];
        ds[1] = -eq.q_coeff_side(r, interior) * s[0];
    };
    let states = Dopri5::new(tol).integrate_nodes(&rhs, &[y0, dy0], grid.nodes(), grid.r0())?;
    let (y, dy) = states.into_iter().map(|s| (s[0], s[1])).unzip();
    Ok(RadialSolution {
        grid: Arc::clone(grid),
        y,
        dy,
        normalization,
        lambda: nu,
        k2: eq.k2,
        mu: eq.mu(),
        nonlocal: None,
    })
}

/// Asymptotic series of the free Jost solution, e^{−ikr} Σ aₙ r^{−n} with
/// a_{n+1} = (c − n(n+1)) aₙ / (2ik(n+1)), c = λ² − 1/4. It terminates for
/// half-integer λ and is otherwise summed to its smallest term, which must
/// fall below 1e−17 of the sum. Returns (y, y′) at r.
fn jost_tail(c: C, k: C, r: f64) -> Option<(C, C)> {
    let ik = C::new(0.0, 1.0) * k;
    let (mut w, mut dw) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    let mut term = C::new(1.0, 0.0);
    for n in 0..500 {
        let nf = n as f64;
        let next = term * (c - nf * (nf + 1.0)) / (2.0 * ik * (nf + 1.0) * r);
        if next.norm() <= 1e-17 * w.norm() {
            let e = (-ik * r).exp();
            return Some((e * w, e * (dw - ik * w)));
        }
        if n > 0 && next.norm() > term.norm() {
            return None;
        }
        term = next;
        w += term;
        dw -= (nf + 1.0) * term / r;
    }
    None
}

/// Jost solution, e^{ikr} f → 1 as r → ∞. Outside r0 only the centrifugal
/// term acts, so f is started from its asymptotic series at a radius where
/// that series converges (at least the grid end) and integrated inward to
/// r_min. For λ = 1/2 this is e^{−ikr} on [r0, ∞). The equation's k² is
/// replaced by k·k.
pub fn integrate_jost(eq: &EffectiveEquation, grid: &Arc<RadialGrid>, k: C, tol: f64) -> Result<RadialSolution> {
    check_tol(tol)?;
    if k.norm() == 0.0 {
        return Err(Error::InvalidInput("Jost normalisation is degenerate at k = 0".into()));
    }
    if eq.has_active_kernel() {
        return Err(Error::InvalidInput("Jost solutions are computed for local equations only".into()));
    }
    check_grid(eq, grid)?;
    let eq = eq.with_k2(k * k);
    let nodes = grid.nodes();
    let n = nodes.len();
    let r_end = nodes[n - 1];
    let c = eq.centrifugal();
    let mut start = r_end;
    let mut tail = jost_tail(c, k, start);
    if tail.is_none() {
        start = r_end.max(20.0 / k.norm());
        for _ in 0..60 {
            tail = jost_tail(c, k, start);
            if tail.is_some() {
                break;
            }
            start *= 2.0;
        }
    }
    let (y_start, dy_start) = tail.ok_or_else(|| Error::InvalidInput(format!("no convergent Jost tail for lambda={}, k={k}", eq.lambda)))?;
    let mut inward: Vec<f64> = nodes.iter().rev().copied().collect();
    let extra = usize::from(start > r_end);
    if extra == 1 {
        inward.insert(0, start);
    }
    let rhs = |r: f64, interior: bool, s: &[C], ds: &mut [C]| {
        ds[0] = s[1];
        ds[1] = -eq.q_coeff_side(r, interior) * s[0];
    };
    let states = Dopri5::new(tol).integrate_nodes(&rhs, &[y_start, dy_start], &inward, grid.r0())?;
    let mut y = vec![C::new(0.0, 0.0); n];
    let mut dy = vec![C::new(0.0, 0.0); n];
    for (j, s) in states.into_iter().skip(extra).enumerate() {
        let i = n - 1 - j;
        y[i] = s[0];
        dy[i] = s[1];
    }
    Ok(RadialSolution {
        grid: Arc::clone(grid),
        y,
        dy,
        normalization: Normalization::Jost { k },
        lambda: eq.lambda,
        k2: eq.k2,
        mu: eq.mu(),
        nonlocal: None,
    })
}

/// Regular solution of the integro-differential equation with a separable
/// kernel, by superposition of the homogeneous solution and one particular
/// solution per kernel term. Falls back to [`integrate_regular`] when the
/// kernel is inactive.
pub fn solve_nonlocal(eq: &EffectiveEquation, grid: &Arc<RadialGrid>, tol: f64) -> Result<RadialSolution> {
    if !eq.has_active_kernel() {
        return integrate_regular(&local_only(eq), grid, tol);
    }
    check_tol(tol)?;
    check_grid(eq, grid)?;
    let lambda = eq.lambda;
    if !(lambda.im == 0.0 && lambda.re > 0.0) {
        return Err(Error::InvalidInput(format!("non-local solve needs real lambda > 0, got {lambda}")));
    }
    if eq.k2.im != 0.0 {
        return Err(Error::InvalidInput("non-local solve needs a real energy".into()));
    }
    let n = eq.potential.kernel.rank();
    if n > MAX_RANK {
        return Err(Error::InvalidInput(format!("kernel rank above {MAX_RANK} is not supported")));
    }
    let mu = eq.mu();
    let p = eq.weight_exponent.unwrap_or(0.0);
    // state layout: [y_0, y_0', y_1, y_1', ..., y_n, y_n', acc(i, m) for i<n, m<=n]
    let ns = n + 1;
    let dim = 2 * ns + n * ns;
    let acc = |i: usize, m: usize| 2 * ns + i * ns + m;

    let r_min = grid.r_min();
    let mut init = vec![C::new(0.0, 0.0); dim];
    let (y0, dy0) = frobenius_start(eq, lambda, r_min);
    init[0] = y0;
    init[1] = dy0;
    // [0, r_min] piece of the homogeneous moments, integrand ~ r^{λ+1/2+p}
    for i in 0..n {
        let s = eq.source_profile(i, r_min, true);
        init[acc(i, 0)] = s * y0 * (r_min / (lambda.re + 0.5 + p + 1.0));
    }

    let rhs = |r: f64, interior: bool, s: &[C], ds: &mut [C]| {
        let q = eq.q_coeff_side(r, interior);
        let mut buf = [0.0f64; MAX_RANK];
        let src = &mut buf[..n];
        for (i, v) in src.iter_mut().enumerate() {
            *v = if interior { eq.source_profile(i, r, true) } else { 0.0 };
        }
        for m in 0..ns {
            ds[2 * m] = s[2 * m + 1];
            ds[2 * m + 1] = -q * s[2 * m];
        }
        for j in 0..n {
            ds[2 * (j + 1) + 1] += src[j];
        }
        for i in 0..n {
            for m in 0..ns {
                ds[acc(i, m)] = s[2 * m] * src[i];
            }
        }
    };
    // Integrate through the kink points of the profiles as extra nodes:
    // particular solutions switch on there from exactly zero.
    let mut kinks: Vec<f64> = eq
        .potential
        .kernel
        .profiles()
        .iter()
        .flat_map(|g| g.breakpoints())
        .filter(|&b| b > r_min && b < grid.r0())
        .collect();
    kinks.sort_by(f64::total_cmp);
    let mut nodes = Vec::with_capacity(grid.len() + kinks.len());
    let mut keep = Vec::with_capacity(grid.len());
    let mut kk = kinks.iter().peekable();
    for &r in grid.nodes() {
        while let Some(&&b) = kk.peek() {
            if b < r {
                nodes.push(b);
                kk.next();
            } else {
                if b == r {
                    kk.next();
                }
                break;
            }
        }
        keep.push(nodes.len());
        nodes.push(r);
    }
    // Floors for the particular solutions and their moments, from the
    // size they reach when driven by the source.
    let r0 = grid.r0();
    let peak: Vec<f64> = (0..n)
        .map(|j| (1..512).fold(0.0f64, |m, i| m.max(eq.source_profile(j, r0 * i as f64 / 512.0, true).abs())))
        .collect();
    let floor = 1e-6 * tol;
    let mut atol = vec![0.0; dim];
    for j in 0..n {
        atol[2 * (j + 1)] = floor * peak[j] * r0 * r0;
        atol[2 * (j + 1) + 1] = floor * peak[j] * r0;
        for i in 0..n {
            atol[acc(i, j + 1)] = floor * peak[i] * peak[j] * r0.powi(3);
        }
    }
    let all = Dopri5::new(tol).with_component_atol(atol).integrate_nodes(&rhs, &init, &nodes, grid.r0())?;
    let states: Vec<Vec<C>> = keep.iter().map(|&i| all[i].clone()).collect();

    let at_r0 = &states[grid.r0_index()];
    let coupling = eq.potential.kernel.coupling();
    let cmat = DMatrix::<C>::from_fn(n, n, |i, j| C::new(coupling[i][j], 0.0));
    let m = DMatrix::<C>::from_fn(n, n, |i, j| at_r0[acc(i, j + 1)]);
    let ch = DVector::<C>::from_fn(n, |i, _| at_r0[acc(i, 0)]);
    let b = DMatrix::<C>::identity(n, n) - (&cmat * &m) * C::new(mu, 0.0);
    let rhs_vec = (&cmat * &ch) * C::new(mu, 0.0);
    let det = b.determinant();
    let scale = b.norm().max(1.0).powi(n as i32);
    if det.norm() < DEGENERACY_THRESHOLD * scale {
        return Err(Error::DegenerateCoupling { det: det.norm() });
    }
    let a = b
        .lu()
        .solve(&rhs_vec)
        .ok_or(Error::DegenerateCoupling { det: det.norm() })?;

    let mut y = Vec::with_capacity(states.len());
    let mut dy = Vec::with_capacity(states.len());
    for s in &states {
        let mut v = s[0];
        let mut dv = s[1];
        for j in 0..n {
            v += a[j] * s[2 * (j + 1)];
            dv += a[j] * s[2 * (j + 1) + 1];
        }
        y.push(v);
        dy.push(dv);
    }
    let moments = (0..n)
        .map(|i| at_r0[acc(i, 0)] + (0..n).map(|j| a[j] * at_r0[acc(i, j + 1)]).sum::<C>())
        .collect();
    Ok(RadialSolution {
        grid: Arc::clone(grid),
        y,
        dy,
        normalization: Normalization::OriginRegular,
        lambda,
        k2: eq.k2,
        mu,
        nonlocal: Some(NonlocalData { amplitudes: a.iter().copied().collect(), det, moments }),
    })
}

fn local_only(eq: &EffectiveEquation) -> EffectiveEquation {
    let mut e = eq.clone();
    e.weight_exponent = None;
    e
}

/// Regular solution for any supported equation (local or separable kernel).
pub fn solve_regular(eq: &EffectiveEquation, grid: &Arc<RadialGrid>, tol: f64) -> Result<RadialSolution> {
    if eq.has_active_kernel() {
        solve_nonlocal(eq, grid, tol)
    } else {
        integrate_regular(&local_only(eq), grid, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{effective_equation, ChannelParams, EnergyValue, PotentialModel};
    use crate::specfun::{bessel_j, gamma};

    fn grid(r0: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(r0, 2.0 * r0, 200, 40).unwrap())
    }

    #[test]
    fn free_regular_matches_bessel() {
        let pot = PotentialModel::free(1.0).unwrap();
        let g = grid(1.0);
        for &(q, l, k) in &[(3.0, 0.0, 1.3), (3.0, 1.0, 0.7), (4.0, 0.0, 2.0), (2.5, 0.0, 0.4)] {
            let ch = ChannelParams::new(q, l);
            let lam = ch.lambda().re;
            let eq = effective_equation(&ch, &pot, EnergyValue::from_k(k)).unwrap();
            let sol = integrate_regular(&eq, &g, 1e-11).unwrap();
            let norm = gamma(lam + 1.0).unwrap() * (2.0 / k).powf(lam);
            for (i, &r) in g.nodes().iter().enumerate().step_by(17) {
                let exact = norm * r.sqrt() * bessel_j(lam, k * r).unwrap().value;
                let scale = r.powf(lam + 0.5).max(1e-300);
                assert!((sol.y[i].re - exact).abs() < 1e-8 * scale.max(exact.abs()), "q={q} l={l} r={r}");
            }
        }
    }

    #[test]
    fn square_well_s_wave_interior() {
        let pot = PotentialModel::square_well(9.0, 1.0).unwrap();
        let g = grid(1.0);
        let k = 0.8f64;
        let kp = (k * k + 9.0).sqrt();
        let eq = effective_equation(&ChannelParams::new(3.0, 0.0), &pot, EnergyValue::from_k(k)).unwrap();
        let sol = integrate_regular(&eq, &g, 1e-11).unwrap();
        let (y, dy) = sol.at_r0();
        assert!((y.re - kp.sin() / kp).abs() < 1e-9);
        assert!((dy.re - kp.cos()).abs() < 1e-9);
    }

    #[test]
    fn jost_is_plane_wave_when_free() {
        let pot = PotentialModel::free(1.0).unwrap();
        let g = grid(1.0);
        let k = C::new(1.1, 0.0);
        let eq = effective_equation(&ChannelParams::new(3.0, 0.0), &pot, EnergyValue::from_k(1.1)).unwrap();
        let sol = integrate_jost(&eq, &g, k, 1e-11).unwrap();
        for (i, &r) in g.nodes().iter().enumerate() {
            assert!((sol.y[i] - (C::new(0.0, -1.1) * r).exp()).norm() < 1e-8);
        }
    }

    #[test]
    fn irregular_partner_leading_power() {
        let pot = PotentialModel::free(1.0).unwrap();
        let g = grid(1.0);
        let ch = ChannelParams::new(2.5, 0.0);
        let eq = effective_equation(&ch, &pot, EnergyValue::from_k(0.5)).unwrap();
        let sol = integrate_irregular_test_mode(&eq, &g, 1e-11).unwrap();
        let lam = ch.lambda().re;
        let r = g.nodes()[5];
        assert!((sol.y[5].re / r.powf(0.5 - lam) - 1.0).abs() < 1e-6);
        let bad = effective_equation(&ChannelParams::new(3.0, 1.0), &pot, EnergyValue::from_k(0.5)).unwrap();
        assert!(integrate_irregular_test_mode(&bad, &g, 1e-10).is_err());
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let pot = PotentialModel::free(1.0).unwrap();
        let eq = effective_equation(&ChannelParams::new(2.0, 0.0), &pot, EnergyValue::from_k(1.0)).unwrap();
        assert!(integrate_regular(&eq, &grid(1.0), 1e-10).is_err());
    }
}
