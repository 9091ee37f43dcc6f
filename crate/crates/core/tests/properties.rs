use proptest::prelude::*;
use qws::model::*;
use qws::scattering::{phase_shift_fixed, PhaseShiftOptions};
use qws::specfun::{bessel_jy, gamma};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..40.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..30.0, x in 0.5f64..80.0) {
        // J_{ν−1} + J_{ν+1} = (2ν/x) J_ν, same for Y
        let (a, b, c) = (bessel_jy(nu - 1.0, x).unwrap(), bessel_jy(nu, x).unwrap(), bessel_jy(nu + 1.0, x).unwrap());
        let scale = a.j.value.abs() + c.j.value.abs() + (2.0 * nu / x * b.j.value).abs();
        prop_assert!((a.j.value + c.j.value - 2.0 * nu / x * b.j.value).abs() <= 1e-11 * scale);
        let scale = a.y.value.abs() + c.y.value.abs() + (2.0 * nu / x * b.y.value).abs();
        prop_assert!((a.y.value + c.y.value - 2.0 * nu / x * b.y.value).abs() <= 1e-11 * scale);
    }

    #[test]
    fn jy_wronskian(nu in 0.0f64..40.0, x in 0.1f64..200.0) {
        // J Y′ − J′ Y = 2/(π x)
        let p = bessel_jy(nu, x).unwrap();
        let w = p.j.value * p.y.derivative - p.j.derivative * p.y.value;
        let want = 2.0 / (std::f64::consts::PI * x);
        let scale = (p.j.value * p.y.derivative).abs().max(want);
        prop_assert!((w - want).abs() <= 1e-11 * scale);
    }

    #[test]
    fn same_lambda_same_phase(l in 0u32..3, depth in 0.5f64..40.0, k in 0.05f64..5.0) {
        // (q, l) and (q + 2, l − 1) share λ
        let l = l as f64 + 1.0;
        let pot = PotentialModel::square_well(depth, 1.0).unwrap();
        let a = phase_shift_fixed(&ChannelParams::new(3.0, l), &pot, k, PhaseShiftOptions::default().tol).unwrap();
        let b = phase_shift_fixed(&ChannelParams::new(5.0, l - 1.0), &pot, k, PhaseShiftOptions::default().tol).unwrap();
        prop_assert!((a.tan_eta - b.tan_eta).abs() <= 1e-10 * a.tan_eta.abs().max(1.0));
    }

    #[test]
    fn reduction_round_trips(q in 2.2f64..6.0, seed in 0.1f64..3.0) {
        let r: Vec<f64> = (1..20).map(|i| 0.1 * i as f64).collect();
        let psi: Vec<num_complex::Complex64> = r.iter().map(|x| num_complex::Complex64::new((seed * x).sin(), x * 0.3)).collect();
        let y = reduce_wavefunction(&r, &psi, q).unwrap();
        let back = unreduce_wavefunction(&r, &y, q).unwrap();
        for (a, b) in psi.iter().zip(&back) {
            prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
        }
    }
}
