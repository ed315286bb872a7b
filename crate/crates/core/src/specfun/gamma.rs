//! Reciprocal-gamma helpers for the Temme series.
#![allow(clippy::excessive_precision)]

/// Taylor coefficients of `1/Gamma(z) = sum_{k>=1} C[k-1] z^k`.
const RGAMMA_TAYLOR: [f64; 29] = [
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
];

/// Temme's auxiliary gamma quantities for `|mu| <= 1/2`:
/// `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))`, where
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    debug_assert!(mu.abs() <= 0.5 + 1e-12);
    // 1/Gamma(1+mu) = sum_k C[k] mu^k ; split into even and odd powers.
    let mu2 = mu * mu;
    let mut even = 0.0;
    let mut odd = 0.0;
    for (k, &c) in RGAMMA_TAYLOR.iter().enumerate().rev() {
        if k % 2 == 0 {
            even = even * mu2 + c;
        } else {
            odd = odd * mu2 + c;
        }
    }
    // even = sum C[2m] mu^{2m} ; odd = sum C[2m+1] mu^{2m}
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_gamma_matches_libm() {
        for &mu in &[-0.5, -0.31, -1e-3, 0.0, 2e-7, 0.2, 0.45, 0.5] {
            let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
            let ref_pl = 1.0 / libm::tgamma(1.0 + mu);
            let ref_mi = 1.0 / libm::tgamma(1.0 - mu);
            assert!((gampl - ref_pl).abs() < 1e-15, "mu={mu}");
            assert!((gammi - ref_mi).abs() < 1e-15, "mu={mu}");
            assert!((gam2 - 0.5 * (ref_pl + ref_mi)).abs() < 1e-15);
            if mu.abs() > 0.1 {
                let g1 = (ref_mi - ref_pl) / (2.0 * mu);
                assert!((gam1 - g1).abs() < 1e-14, "mu={mu}: {gam1} vs {g1}");
            }
        }
        // gam1(0) = -Euler gamma
        assert!((temme_gammas(0.0).0 + 0.577_215_664_901_532_9).abs() < 1e-16);
    }
}
