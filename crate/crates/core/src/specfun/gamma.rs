use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Taylor coefficients of 1/Γ(z) about z = 0, starting at z¹.
const RGAMMA_TAYLOR: [f64; 30] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
    1.714_406_321_927_337_433_4e-20,
];

/// Γ(x) for real x away from the poles at 0, −1, −2, ...
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("gamma: non-finite argument {x}")));
    }
    if x <= 0.0 && x == x.round() {
        return Err(Error::InvalidInput(format!("gamma: pole at x = {x}")));
    }
    if x > 171.6 {
        return Err(Error::Range {
            function: "gamma",
            nu: 0.0,
            x,
            reason: "overflow",
        });
    }
    if x.abs() <= 0.5 {
        // Γ(x) = 1 / (x · [1/Γ(1+x)]) keeps full precision near the pole at 0.
        return Ok(1.0 / (x * rgamma_one_plus(x)));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * lanczos(1.0 - x)));
    }
    Ok(lanczos(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("ln_gamma: argument {x} must be positive")));
    }
    if x < 0.5 {
        return Ok(-(x * rgamma_one_plus(x)).abs().ln());
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln())
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) e^{-t} split in halves so large x does not overflow early.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * sum
}

/// 1/Γ(1+x) for |x| ≤ 1/2 from the Taylor series of 1/Γ.
pub(crate) fn rgamma_one_plus(x: f64) -> f64 {
    // 1/Γ(1+x) = Σ_{k≥1} c_k x^{k-1}
    RGAMMA_TAYLOR.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Temme's auxiliary gamma combinations for |mu| ≤ 1/2:
/// (γ₁, γ₂, 1/Γ(1+μ), 1/Γ(1−μ)) with γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ)
/// and γ₂ = (1/Γ(1−μ) + 1/Γ(1+μ))/2.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut odd = 0.0; // Σ c_{2j+1} μ^{2j}
    let mut even = 0.0; // Σ c_{2j+2} μ^{2j}
    for j in (0..RGAMMA_TAYLOR.len() / 2).rev() {
        odd = odd * mu2 + RGAMMA_TAYLOR[2 * j];
        even = even * mu2 + RGAMMA_TAYLOR[2 * j + 1];
    }
    let gampl = odd + mu * even;
    let gammi = odd - mu * even;
    (-even, odd, gampl, gammi)
}
