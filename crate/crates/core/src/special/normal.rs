//! Standard Gaussian distribution.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// A probability together with its natural logarithm.
///
/// Both are computed directly so that `log_value` stays meaningful long after
/// `value` has underflowed or rounded to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionEval {
    pub value: f64,
    pub log_value: f64,
}

impl DistributionEval {
    pub(crate) fn from_log(log_value: f64) -> Self {
        Self { value: log_value.exp(), log_value }
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// ln Φ(x) for x below −20 via the Mills-ratio continued fraction.
fn ln_cdf_far_left(x: f64) -> f64 {
    let z = -x;
    let mut t = z;
    for n in (1..=60).rev() {
        t = z + f64::from(n) / t;
    }
    -0.5 * z * z - LN_SQRT_2PI - t.ln()
}

pub(crate) fn ln_ncdf(x: f64) -> f64 {
    if x < -20.0 {
        ln_cdf_far_left(x)
    } else if x < 0.0 {
        (0.5 * libm::erfc(-x * FRAC_1_SQRT_2)).ln()
    } else {
        (-0.5 * libm::erfc(x * FRAC_1_SQRT_2)).ln_1p()
    }
}

pub(crate) fn ncdf(x: f64) -> f64 {
    if x < -20.0 {
        ln_cdf_far_left(x).exp()
    } else {
        0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
    }
}

pub fn normal_cdf(x: f64) -> DistributionEval {
    if x.is_nan() {
        return DistributionEval { value: f64::NAN, log_value: f64::NAN };
    }
    DistributionEval { value: ncdf(x), log_value: ln_ncdf(x) }
}

/// Upper tail 1 − Φ(x).
pub fn normal_sf(x: f64) -> DistributionEval {
    normal_cdf(-x)
}

pub(crate) fn qnorm(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((r * 2_509.080_928_730_122_7 + 33_430.575_583_588_13) * r + 67_265.770_927_008_7) * r
            + 45_921.953_931_549_87)
            * r
            + 13_731.693_765_509_46)
            * r
            + 1_971.590_950_306_551_4)
            * r
            + 133.141_667_891_784_38)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((r * 5_226.495_278_852_546 + 28_729.085_735_721_943) * r + 39_307.895_800_092_71) * r
            + 21_213.794_301_586_596)
            * r
            + 5_394.196_021_424_751)
            * r
            + 687.187_007_492_057_9)
            * r
            + 42.313_330_701_600_91)
            * r
            + 1.0;
        return q * num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let v = upper_tail_core(tail);
    if q < 0.0 {
        -v
    } else {
        v
    }
}

/// Φ^{-1}(1 − q) for q ≤ 0.075, computed from q itself.
fn upper_tail_core(q: f64) -> f64 {
    let mut r = (-q.ln()).sqrt();
    if r <= 5.0 {
        r -= 1.6;
        let num = ((((((r * 7.745_450_142_783_414e-4 + 0.022_723_844_989_269_184) * r + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((r * 1.050_750_071_644_416_8e-9 + 5.475_938_084_995_345e-4) * r + 0.015_198_666_563_616_457)
            * r
            + 0.148_103_976_427_480_08)
            * r
            + 0.689_767_334_985_1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num =
            ((((((r * 2.010_334_399_292_288e-7 + 2.711_555_568_743_487_6e-5) * r + 0.001_242_660_947_388_078_4) * r
                + 0.026_532_189_526_576_124)
                * r
                + 0.296_560_571_828_504_9)
                * r
                + 1.784_826_539_917_291_3)
                * r
                + 5.463_784_911_164_114)
                * r
                + 6.657_904_643_501_103;
        let den =
            ((((((r * 2.044_263_103_389_939_7e-15 + 1.421_511_758_316_446e-7) * r + 1.846_318_317_510_054_8e-5) * r
                + 7.868_691_311_456_133e-4)
                * r
                + 0.014_875_361_290_850_615)
                * r
                + 0.136_929_880_922_735_8)
                * r
                + 0.599_832_206_555_887_9)
                * r
                + 1.0;
        num / den
    }
}

/// Φ^{-1}(1 − q), accurate for tiny upper-tail probabilities q.
pub(crate) fn qnorm_upper(q: f64) -> f64 {
    if q < 0.075 {
        upper_tail_core(q)
    } else {
        -qnorm(q)
    }
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("normal_quantile", format!("p must lie in (0, 1), got {p}")));
    }
    Ok(qnorm(p))
}

/// Φ^{-1}(1 − q) for an upper-tail probability q ∈ (0, 1).
pub fn normal_quantile_upper(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("normal_quantile_upper", format!("q must lie in (0, 1), got {q}")));
    }
    Ok(qnorm_upper(q))
}
