use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C;
use qws::model::*;
use qws::radial::RadialGrid;
use qws::scattering::*;
use qws::specfun::bessel_jy;

/// η mod π folded into (−π/2, π/2].
fn fold(x: f64) -> f64 {
    let mut d = x % PI;
    if d > PI / 2.0 {
        d -= PI;
    } else if d <= -PI / 2.0 {
        d += PI;
    }
    d
}

/// Square-well tan η from Bessel matching at r0.
fn square_well_tan_eta(lambda: f64, depth: f64, r0: f64, k: f64) -> f64 {
    let big_k = (k * k + depth).sqrt();
    let inner = bessel_jy(lambda, big_k * r0).unwrap();
    let l = big_k * inner.j.derivative / inner.j.value;
    let outer = bessel_jy(lambda, k * r0).unwrap();
    (l * outer.j.value - k * outer.j.derivative) / (l * outer.y.value - k * outer.y.derivative)
}

#[test]
fn s_wave_square_well_matches_closed_form() {
    let ch = ChannelParams::new(3.0, 0.0);
    let opts = PhaseShiftOptions::default();
    for (depth, k) in [(1.0, 0.5), (9.0, 1.3), (25.0, 3.0)] {
        let pot = PotentialModel::square_well(depth, 1.0).unwrap();
        let big_k = (k * k + depth).sqrt();
        let want = fold((k / big_k * (big_k).tan()).atan() - k);
        let got = phase_shift(&ch, &pot, k, &opts).unwrap();
        assert!((fold(got.eta) - want).abs() < 1e-9, "V0={depth} k={k}: {} vs {want}", got.eta);
        assert!((fold(got.matched.eta_raw) - want).abs() < 1e-9);
    }
}

#[test]
fn weak_well_phase_is_small_and_positive() {
    let ch = ChannelParams::new(3.0, 0.0);
    let pot = PotentialModel::square_well(0.5, 1.0).unwrap();
    let k = 0.7;
    let big_k = (k * k + 0.5f64).sqrt();
    let want = (k / big_k * big_k.tan()).atan() - k;
    let got = phase_shift(&ch, &pot, k, &PhaseShiftOptions::default()).unwrap();
    assert!(want > 0.0 && want < PI / 2.0);
    assert!((got.eta - want).abs() < 1e-9, "{} vs {want}", got.eta);
}

#[test]
fn higher_waves_match_bessel_matching() {
    let opts = PhaseShiftOptions::default();
    for (q, l) in [(3.0, 1.0), (4.0, 2.0), (2.6, 0.0)] {
        let ch = ChannelParams::new(q, l);
        let lam = ch.lambda().re;
        let pot = PotentialModel::square_well(12.0, 1.5).unwrap();
        for &k in &[0.4, 1.1, 2.7] {
            let want = square_well_tan_eta(lam, 12.0, 1.5, k).atan();
            let got = phase_shift_fixed(&ch, &pot, k, 1e-12).unwrap();
            assert!((fold(got.eta_raw) - want).abs() < 1e-9, "λ={lam} k={k}: {} vs {want}", got.eta_raw);
            let cont = phase_shift(&ch, &pot, k, &opts).unwrap();
            assert!((fold(cont.eta) - want).abs() < 1e-9);
        }
    }
}

#[test]
fn zero_coupling_gives_zero_phase() {
    let ch = ChannelParams::new(3.0, 1.0);
    let kernel = SeparableKernel::diagonal(vec![(KernelProfile::Window { lo: 0.2, hi: 0.8 }, -30.0)]);
    let pot = PotentialModel::with_kernel(LocalPotential::Gaussian { depth: 4.0, width: 0.5 }, 1.0, kernel)
        .unwrap()
        .at_mu(0.0);
    for &k in &[0.01, 0.5, 4.0] {
        let got = phase_shift(&ch, &pot, k, &PhaseShiftOptions::default()).unwrap();
        assert!(got.eta.abs() < 1e-12, "k={k}: {}", got.eta);
    }
}

#[test]
fn low_energy_phase_scales_as_k_to_two_lambda() {
    let opts = PhaseShiftOptions::default();
    for (q, l) in [(3.0, 0.0), (3.0, 1.0), (5.0, 1.0)] {
        let ch = ChannelParams::new(q, l);
        let lam = ch.lambda().re;
        let pot = PotentialModel::square_well(2.0, 1.0).unwrap();
        let k = 1e-3;
        let a = fold(phase_shift(&ch, &pot, k, &opts).unwrap().eta);
        let b = fold(phase_shift(&ch, &pot, 2.0 * k, &opts).unwrap().eta);
        let slope = (b / a).log2() / 2.0;
        assert!((slope - lam).abs() < 1e-3, "λ={lam}: slope {slope}");
    }
}

#[test]
fn curve_is_continuous_in_k() {
    let ch = ChannelParams::new(3.0, 0.0);
    let pot = PotentialModel::square_well(30.0, 1.0).unwrap();
    let ks: Vec<f64> = (1..=60).map(|i| 0.1 * i as f64).collect();
    let curve = phase_shift_curve(&ch, &pot, &ks, &PhaseShiftOptions::default()).unwrap();
    for w in curve.samples.windows(2) {
        assert!((w[1].eta - w[0].eta).abs() < 1.0, "jump between k={} and k={}", w[0].k, w[1].k);
    }
}

#[test]
fn wronskian_audits_pass_and_match_their_targets() {
    let grid = Arc::new(RadialGrid::new(1.5, 3.0, 800, 100).unwrap());
    let pot = PotentialModel::new(LocalPotential::Gaussian { depth: 5.0, width: 0.5 }, 1.5).unwrap();

    let eq = effective_equation(&ChannelParams::new(2.5, 0.0), &pot, EnergyValue::from_k(1.2)).unwrap();
    let report = audit_phi_pair(&eq, &grid, 1e-12, 1e-8).unwrap();
    assert!(report.passed, "phi pair: {report:?}");
    assert!(report.relative_deviation() < 1e-8);

    let eq = effective_equation(&ChannelParams::new(3.0, 1.0), &pot, EnergyValue::from_k(1.2)).unwrap();
    let report = audit_jost_pair(&eq, &grid, C::new(1.2, 0.0), 1e-12, 1e-8).unwrap();
    assert!(report.passed, "jost pair: {report:?}");
}

#[test]
fn phi_pair_needs_small_lambda() {
    let grid = Arc::new(RadialGrid::new(1.0, 1.0, 200, 0).unwrap());
    let pot = PotentialModel::square_well(1.0, 1.0).unwrap();
    let eq = effective_equation(&ChannelParams::new(3.0, 1.0), &pot, EnergyValue::from_k(1.0)).unwrap();
    assert!(audit_phi_pair(&eq, &grid, 1e-10, 1e-8).is_err());
}

#[test]
fn conjugation_symmetry_for_complex_parameters() {
    let grid = Arc::new(RadialGrid::new(1.0, 2.0, 400, 50).unwrap());
    let pot = PotentialModel::new(LocalPotential::Exponential { depth: 3.0, range: 0.4 }, 1.0).unwrap();
    for (lam, k) in [(C::new(1.2, 0.3), C::new(0.8, 0.1)), (C::new(0.7, -0.2), C::new(2.0, 0.5))] {
        let phi = hermiticity_residual(HermiticityKind::Phi, lam, k, &pot, &grid, 1e-12).unwrap();
        assert!(phi.relative < 1e-10, "phi {lam} {k}: {phi:?}");
        let jost = hermiticity_residual(HermiticityKind::Jost, lam, k, &pot, &grid, 1e-12).unwrap();
        assert!(jost.relative < 1e-10, "jost {lam} {k}: {jost:?}");
    }
}

#[test]
fn non_positive_wavenumber_is_rejected() {
    let ch = ChannelParams::new(3.0, 0.0);
    let pot = PotentialModel::square_well(1.0, 1.0).unwrap();
    assert!(phase_shift(&ch, &pot, 0.0, &PhaseShiftOptions::default()).is_err());
    assert!(phase_shift_fixed(&ch, &pot, -1.0, 1e-10).is_err());
}
