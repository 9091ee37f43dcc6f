//! Acceptance suite: one line per criterion with its measured figure,
//! threshold and wall time. Exits non-zero if any criterion fails.
//!
//! Expected values come from closed forms or oracles written here, never
//! from the library under test.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use qws::model::*;
use qws::radial::*;
use qws::scattering::*;
use qws::specfun::*;
use qws::spectral::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn check(id: usize, name: &str, limit: Duration, f: fn() -> Verdict) -> bool {
    let t = Instant::now();
    let v = f();
    let dt = t.elapsed();
    let in_time = dt <= limit;
    let ok = v.pass && in_time;
    println!(
        "[{}] criterion {id:>2} {name}: {} (runtime {:.2} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        v.detail,
        dt.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn main() {
    let criteria: [(&str, u64, fn() -> Verdict); 10] = [
        ("wronskian-audits", 10, wronskian_audits),
        ("lambda-degeneracy", 10, lambda_degeneracy),
        ("oracle-phase-shifts", 10, oracle_phase_shifts),
        ("low-k-law", 10, low_k_law),
        ("threshold-limits", 1, threshold_limits),
        ("sturm-liouville-signs", 30, sturm_signs),
        ("green-identity", 10, green_identity),
        ("levinson-theorem", 120, levinson),
        ("hermiticity", 20, hermiticity),
        ("special-functions", 5, special_functions),
    ];
    let mut failed = 0;
    for (i, (name, secs, f)) in criteria.iter().enumerate() {
        if !check(i + 1, name, Duration::from_secs(*secs), *f) {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn channel(lambda: f64) -> ChannelParams {
    ChannelParams::from_lambda(C::new(lambda, 0.0))
}

fn gaussian_well(depth: f64, width: f64, r0: f64) -> PotentialModel {
    PotentialModel::new(LocalPotential::Gaussian { depth, width }, r0).unwrap()
}

fn wronskian_audits() -> Verdict {
    let r0 = 1.5;
    let wells = [PotentialModel::square_well(4.0, r0).unwrap(), gaussian_well(6.0, 0.7, r0)];
    let grid = Arc::new(RadialGrid::new(r0, 3.0 * r0, 400, 100).unwrap());
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    let mut all = true;
    let mut runs = 0;
    for pot in &wells {
        for &k in &[0.5, 1.0, 2.0] {
            for &lam in &[0.3, 0.45] {
                let eq = effective_equation(&channel(lam), pot, EnergyValue::from_k(k)).unwrap();
                match audit_phi_pair(&eq, &grid, 1e-12, tol) {
                    Ok(r) => {
                        worst = worst.max(r.relative_deviation());
                        all &= r.passed;
                    }
                    Err(_) => all = false,
                }
                runs += 1;
            }
            for &lam in &[0.5, 1.5, 2.5] {
                let eq = effective_equation(&channel(lam), pot, EnergyValue::from_k(k)).unwrap();
                match audit_jost_pair(&eq, &grid, C::new(k, 0.0), 1e-12, tol) {
                    Ok(r) => {
                        worst = worst.max(r.relative_deviation());
                        all &= r.passed;
                    }
                    Err(_) => all = false,
                }
                runs += 1;
            }
        }
    }
    verdict(all && worst <= tol, format!("{runs} audits, max |W - W_expected|/|W_expected| = {worst:.2e} (<= {tol:.0e})"))
}

fn lambda_degeneracy() -> Verdict {
    let pot = PotentialModel::square_well(6.0, 1.0).unwrap();
    let ks: Vec<f64> = (0..50).map(|i| 0.05 + 4.95 * i as f64 / 49.0).collect();
    let opts = PhaseShiftOptions::default();
    let a = phase_shift_curve(&ChannelParams::new(3.0, 1.0), &pot, &ks, &opts).unwrap();
    let b = phase_shift_curve(&ChannelParams::new(5.0, 0.0), &pot, &ks, &opts).unwrap();
    let dev = a.samples.iter().zip(&b.samples).map(|(x, y)| (x.eta - y.eta).abs()).fold(0.0, f64::max);
    verdict(dev <= 1e-10, format!("50 k-points, max |eta(q=3,l=1) - eta(q=5,l=0)| = {dev:.2e} (<= 1e-10)"))
}

/// s-wave square well: tan(η + k r0) = (k/K) tan(K r0), K = √(k² + V0).
fn square_well_phase(k: f64, v0: f64, r0: f64) -> f64 {
    let kk = (k * k + v0).sqrt();
    ((k / kk) * (kk * r0).tan()).atan() - k * r0
}

fn mod_pi(d: f64) -> f64 {
    let d = d.rem_euclid(PI);
    d.min(PI - d)
}

fn oracle_phase_shifts() -> Verdict {
    let mut worst: f64 = 0.0;
    for &v0 in &[1.0, 4.0, 25.0] {
        let pot = PotentialModel::square_well(v0, 1.0).unwrap();
        for i in 0..40 {
            let k = 0.1 + 4.9 * i as f64 / 39.0;
            let m = phase_shift_fixed(&channel(0.5), &pot, k, 1e-12).unwrap();
            worst = worst.max(mod_pi(m.eta_raw - square_well_phase(k, v0, 1.0)));
        }
    }
    verdict(worst <= 1e-8, format!("120 (k, V0) points, max |eta - eta_exact| mod pi = {worst:.2e} (<= 1e-8)"))
}

fn low_k_law() -> Verdict {
    let pot = PotentialModel::square_well(3.0, 1.0).unwrap();
    let mut worst_slope: f64 = 0.0;
    let mut worst_form: f64 = 0.0;
    let mut parts = Vec::new();
    for &lam in &[0.5, 1.5, 2.5] {
        let ch = channel(lam);
        let logs: Vec<(f64, f64)> = (0..9)
            .map(|i| {
                let k = 10f64.powf(-4.0 + 2.0 * i as f64 / 8.0);
                let t = phase_shift_fixed(&ch, &pot, k, 1e-12).unwrap().tan_eta;
                (k.ln(), t.abs().ln())
            })
            .collect();
        let slope = ls_slope(&logs);
        let rel = (slope / (2.0 * lam) - 1.0).abs();
        worst_slope = worst_slope.max(rel);
        let a0 = log_derivative_interior(&ch, &pot, 0.0, 1e-12).unwrap().a;
        let full = phase_shift_fixed(&ch, &pot, 1e-3, 1e-12).unwrap().tan_eta;
        let asym = low_k_phase_asymptotic(lam, a0, 1e-3, 1.0).unwrap();
        worst_form = worst_form.max((asym / full - 1.0).abs());
        parts.push(format!("slope({lam})={slope:.6}"));
    }
    verdict(
        worst_slope <= 0.02 && worst_form <= 0.01,
        format!(
            "{}; max slope error {:.2e} (<= 2%), full vs asymptotic at k=1e-3 {:.2e} (<= 1%)",
            parts.join(", "),
            worst_slope,
            worst_form
        ),
    )
}

fn ls_slope(p: &[(f64, f64)]) -> f64 {
    let n = p.len() as f64;
    let mx = p.iter().map(|q| q.0).sum::<f64>() / n;
    let my = p.iter().map(|q| q.1).sum::<f64>() / n;
    let sxy: f64 = p.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let sxx: f64 = p.iter().map(|q| (q.0 - mx) * (q.0 - mx)).sum();
    sxy / sxx
}

fn threshold_limits() -> Verdict {
    let kappa = 1e-12f64.sqrt();
    let mut worst: f64 = 0.0;
    for &lam in &[0.5, 1.5, 3.5] {
        for &r0 in &[1.0, 2.0] {
            let ext = log_derivative_exterior(lam, kappa, r0).unwrap();
            let int = log_derivative_interior_free(lam, kappa, r0).unwrap();
            worst = worst.max((ext - (0.5 - lam) / r0).abs()).max((int - (lam + 0.5) / r0).abs());
        }
    }
    verdict(worst <= 1e-6, format!("E = -1e-12, max deviation from threshold values {worst:.3e} (<= 1e-6)"))
}

fn sturm_signs() -> Verdict {
    let local = (channel(0.5), PotentialModel::square_well(9.0, 1.0).unwrap(), -8.0);
    let kernel = (
        channel(1.5),
        PotentialModel::with_kernel(
            LocalPotential::Zero,
            1.0,
            SeparableKernel::diagonal(vec![(KernelProfile::Window { lo: 0.2, hi: 0.8 }, -600.0)]),
        )
        .unwrap(),
        -40.0,
    );
    let mut worst_gap: f64 = 0.0;
    let mut signs = true;
    let mut evaluated = 0;
    let mut skipped = 0;
    for (ch, pot, e_min) in [&local, &kernel] {
        for i in 0..20 {
            let e = e_min + (-0.2 - e_min) * i as f64 / 19.0;
            match sturm_liouville_check(ch, pot, e, 1e-6 * e.abs(), 1e-12) {
                Ok(s) => {
                    signs &= s.signs_hold();
                    worst_gap = worst_gap.max(s.max_relative_gap());
                    evaluated += 1;
                }
                Err(_) => skipped += 1,
            }
        }
    }
    verdict(
        signs && worst_gap <= 0.01 && skipped == 0,
        format!(
            "{evaluated} energies (local + rank-1 kernel), signs hold: {signs}, max gap to integral forms {worst_gap:.2e} (<= 1%), failures {skipped}"
        ),
    )
}

fn rank2(coupling: Vec<Vec<f64>>) -> PotentialModel {
    let profiles = vec![
        KernelProfile::GaussianBump { center: 0.4, width: 0.15 },
        KernelProfile::PolynomialBump { a: 2.0, b: 2.0 },
    ];
    let kernel = SeparableKernel::with_unchecked_coupling(profiles, coupling).unwrap();
    PotentialModel::with_kernel(LocalPotential::SquareWell { depth: 2.0 }, 1.0, kernel).unwrap()
}

fn green_residual(pot: &PotentialModel, k1: f64, k2: f64) -> f64 {
    let grid = Arc::new(RadialGrid::new(1.0, 1.0, 4000, 0).unwrap());
    let ch = channel(1.5);
    let solve = |k: f64| {
        let eq = effective_equation(&ch, pot, EnergyValue::from_k(k)).unwrap();
        solve_regular(&eq, &grid, 1e-12).unwrap()
    };
    green_identity_residual(&solve(k1), &solve(k2)).unwrap().relative
}

fn green_identity() -> Verdict {
    let symmetric = rank2(vec![vec![-5.0, 2.0], vec![2.0, -3.0]]);
    let antisymmetric = rank2(vec![vec![0.0, 40.0], vec![-40.0, 0.0]]);
    let pairs = [(0.5, 1.0), (1.0, 2.0), (0.3, 1.7), (1.2, 1.25), (2.5, 0.8)];
    let worst = pairs.iter().map(|&(a, b)| green_residual(&symmetric, a, b)).fold(0.0, f64::max);
    let control = pairs.iter().map(|&(a, b)| green_residual(&antisymmetric, a, b)).fold(f64::INFINITY, f64::min);
    verdict(
        worst <= 1e-8 && control >= 1e-2,
        format!("symmetric rank-2 max relative residual {worst:.2e} (<= 1e-8), antisymmetric control min {control:.2e} (>= 1e-2)"),
    )
}

/// s-wave square-well bound states from −κ = K cot(K r0), K² + κ² = V0:
/// one root per branch K r0 ∈ ((m + 1/2)π, (m + 1)π) below √V0 r0.
fn square_well_levels(v0: f64, r0: f64) -> Vec<f64> {
    let kmax = v0.sqrt();
    let f = |kk: f64| kk / (kk * r0).tan() + (v0 - kk * kk).max(0.0).sqrt();
    let mut out = Vec::new();
    let mut m = 0.0;
    loop {
        let lo = (m + 0.5) * PI / r0;
        if lo >= kmax {
            break;
        }
        let hi = ((m + 1.0) * PI / r0 - 1e-14).min(kmax);
        let (mut a, mut b) = (lo + 1e-14, hi);
        if f(a).signum() == f(b).signum() {
            break;
        }
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            if f(c).signum() == f(a).signum() {
                a = c
            } else {
                b = c
            }
        }
        let kk = 0.5 * (a + b);
        out.push(kk * kk - v0);
        m += 1.0;
    }
    out.sort_by(f64::total_cmp);
    out
}

fn levinson() -> Verdict {
    let s = channel(0.5);
    let p = channel(1.5);
    let corpus: Vec<(&str, ChannelParams, PotentialModel, Option<Vec<f64>>)> = vec![
        ("well V0=1", s, PotentialModel::square_well(1.0, 1.0).unwrap(), Some(square_well_levels(1.0, 1.0))),
        ("well V0=9", s, PotentialModel::square_well(9.0, 1.0).unwrap(), Some(square_well_levels(9.0, 1.0))),
        (
            "well V0=4pi^2",
            s,
            PotentialModel::square_well(4.0 * PI * PI, 1.0).unwrap(),
            Some(square_well_levels(4.0 * PI * PI, 1.0)),
        ),
        // p-wave threshold states appear where j0(√V0 r0) = 0, i.e. √V0 r0 = mπ
        ("p-wave well V0=25", p, PotentialModel::square_well(25.0, 1.0).unwrap(), None),
        (
            "rank-1 kernel",
            p,
            PotentialModel::with_kernel(
                LocalPotential::Zero,
                1.0,
                SeparableKernel::diagonal(vec![(KernelProfile::Window { lo: 0.2, hi: 0.8 }, -600.0)]),
            )
            .unwrap(),
            None,
        ),
        (
            "gaussian + kernel",
            s,
            PotentialModel::with_kernel(
                LocalPotential::Gaussian { depth: 10.0, width: 0.6 },
                1.0,
                SeparableKernel::diagonal(vec![(KernelProfile::Window { lo: 0.1, hi: 0.9 }, -20.0)]),
            )
            .unwrap(),
            None,
        ),
    ];
    let p_wave_count = (25f64.sqrt() / PI).floor() as usize;
    let mut all = true;
    let mut parts = Vec::new();
    for (name, ch, pot, oracle) in &corpus {
        match levinson_verify(ch, pot, &LevinsonOptions::default()) {
            Ok(r) => {
                let n = r.n_direct;
                let mut ok = r.pass && (r.eta0 - n as f64 * PI).abs() <= 1e-2 && n == r.n_continuation;
                if let Some(levels) = oracle {
                    ok &= levels.len() == n
                        && levels.iter().zip(&r.bound_energies).all(|(a, b)| (a - b).abs() <= 1e-8 * a.abs().max(1.0));
                }
                if *name == "p-wave well V0=25" {
                    ok &= n == p_wave_count;
                }
                all &= ok;
                parts.push(format!("{name}: n={n}, eta0/pi={:.6}{}", r.eta0 / PI, if ok { "" } else { " FAILED" }));
            }
            Err(e) => {
                all = false;
                parts.push(format!("{name}: error {e}"));
            }
        }
    }
    verdict(all, parts.join("; "))
}

fn hermiticity() -> Verdict {
    let pot = PotentialModel::square_well(4.0, 1.0).unwrap();
    let grid = Arc::new(RadialGrid::new(1.0, 2.0, 400, 50).unwrap());
    let lambdas = [C::new(0.5, 0.3), C::new(0.5, -0.3), C::new(1.5, 0.5), C::new(1.5, -0.5)];
    let ks = [C::new(1.0, 0.2), C::new(1.0, -0.2)];
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for kind in [HermiticityKind::Phi, HermiticityKind::Jost] {
        for &lam in &lambdas {
            for &k in &ks {
                match hermiticity_residual(kind, lam, k, &pot, &grid, 1e-12) {
                    Ok(h) => worst = worst.max(h.relative),
                    Err(_) => errors += 1,
                }
            }
        }
    }
    verdict(worst <= 1e-8 && errors == 0, format!("16 lattice points, max relative residual {worst:.2e} (<= 1e-8), errors {errors}"))
}

fn special_functions() -> Verdict {
    let orders = [0.0, 0.5, 1.0, 1.5, 2.7, 10.0];
    let xs: Vec<f64> = (0..=50).map(|i| 10f64.powf(-3.0 + 5.0 * i as f64 / 50.0)).collect();
    let mut cyl: f64 = 0.0;
    let mut modw: f64 = 0.0;
    let mut rec: f64 = 0.0;
    for &nu in &orders {
        for &x in &xs {
            let p = bessel_jy(nu, x).unwrap();
            let w = p.j.value * p.y.derivative - p.j.derivative * p.y.value;
            let expected = 2.0 / (PI * x);
            cyl = cyl.max((w - expected).abs() / expected);
            let m = bessel_i_k(nu, x).unwrap();
            // scale factors cancel: e^{x} e^{-x}
            let wm = m.i.value * m.k.derivative - m.i.derivative * m.k.value;
            let scale = (m.i.exponent + m.k.exponent).exp();
            modw = modw.max((wm * scale + 1.0 / x).abs() * x);
            if nu >= 1.0 {
                let a = bessel_j(nu - 1.0, x).unwrap().value;
                let b = bessel_j(nu + 1.0, x).unwrap().value;
                let c = bessel_j(nu, x).unwrap().value;
                let t = 2.0 * nu / x * c;
                let big = a.abs().max(b.abs()).max(t.abs());
                if big > 0.0 {
                    rec = rec.max((a + b - t).abs() / big);
                }
            }
        }
    }

    // half-integer closed forms, scaled by the envelope √(2/(πx))
    let mut half: f64 = 0.0;
    for i in 0..=40 {
        let x = 0.1 * 500f64.powf(i as f64 / 40.0);
        let (s, c) = x.sin_cos();
        let amp = (2.0 / (PI * x)).sqrt();
        let j = [amp * s, amp * (s / x - c), amp * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x)];
        let y = [-amp * c, -amp * (c / x + s), amp * (-(3.0 / (x * x) - 1.0) * c - 3.0 * s / x)];
        for (n, nu) in [0.5, 1.5, 2.5].into_iter().enumerate() {
            let p = bessel_jy(nu, x).unwrap();
            let env = amp * (1.0 + 3.0 / (x * x)).max(1.0);
            half = half.max((p.j.value - j[n]).abs() / env).max((p.y.value - y[n]).abs() / env);
        }
        let k = bessel_i_k(0.5, x).unwrap().k;
        let k_exact = (PI / (2.0 * x)).sqrt();
        half = half.max((k.value - k_exact).abs() / k_exact);
    }

    // J_ν(x) Γ(ν+1) (2/x)^ν = 1 − x²/(4(ν+1)) + …
    let mut small: f64 = 0.0;
    for &nu in &orders {
        let g = gamma(nu + 1.0).unwrap();
        for &x in &[1e-4, 1e-5, 1e-6] {
            let v = bessel_j(nu, x).unwrap().value * g * (2.0 / x).powf(nu);
            small = small.max((v - 1.0).abs());
        }
    }

    // Γ against factorials and half-integer values
    let mut gam: f64 = 0.0;
    let mut fact = 1.0f64;
    let mut half_fact = PI.sqrt();
    for n in 1..=40 {
        let nf = n as f64;
        gam = gam.max((gamma(nf).unwrap() / fact - 1.0).abs());
        gam = gam.max((gamma(nf - 0.5).unwrap() / half_fact - 1.0).abs());
        fact *= nf;
        half_fact *= nf - 0.5;
    }

    // the envelope edges refuse instead of returning garbage
    let refuses = bessel_j(50.5, 1.0).is_err() && bessel_j(1.0, 2e3).is_err() && gamma(-2.0).is_err();

    let pass = cyl <= 1e-9 && modw <= 1e-9 && rec <= 1e-9 && half <= 1e-12 && small <= 1e-6 && gam <= 1e-12 && refuses;
    verdict(
        pass,
        format!(
            "cylinder W {cyl:.1e}, modified W {modw:.1e}, recurrence {rec:.1e} (<= 1e-9); half-integer {half:.1e} (<= 1e-12); small-x {small:.1e} (<= 1e-6); gamma {gam:.1e} (<= 1e-12); range errors: {refuses}"
        ),
    )
}
