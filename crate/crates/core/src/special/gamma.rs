//! Log-gamma, digamma and trigamma for positive real arguments.
//!
//! All three shift the argument upward with the recurrence until it is at
//! least 15 (12 for the polygammas) and finish with the asymptotic series.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT: f64 = 15.0;
const POLY_SHIFT: f64 = 12.0;

/// Tail of Stirling's series, B_2n / (2n (2n-1) y^(2n-1)).
fn stirling_tail(y: f64) -> f64 {
    let r = 1.0 / y;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 * (1.0 / 156.0)))))))
}

fn stirling(y: f64) -> f64 {
    (y - 0.5) * y.ln() - y + LN_SQRT_2PI + stirling_tail(y)
}

/// ln Γ(x) for x > 0 without argument checks.
pub(crate) fn lgamma(x: f64) -> f64 {
    if x < 1e-8 {
        return -x.ln() - 0.577_215_664_901_532_9 * x;
    }
    if x >= SHIFT {
        return stirling(x);
    }
    let mut prod = 1.0;
    let mut y = x;
    while y < SHIFT {
        prod *= y;
        y += 1.0;
    }
    stirling(y) - prod.ln()
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("ln_gamma", format!("x must be positive and finite, got {x}")));
    }
    Ok(lgamma(x))
}

/// ln Γ(x + a) − ln Γ(x), accurate when x is large and a is moderate.
pub fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    let y = x + a;
    if x >= 1e4 && y >= 1e4 && a.abs() <= 0.5 * x {
        (x - 0.5) * (a / x).ln_1p() + a * y.ln() - a + stirling_tail(y) - stirling_tail(x)
    } else {
        lgamma(y) - lgamma(x)
    }
}

/// ln B(a, b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, big) = if a <= b { (a, b) } else { (b, a) };
    if big >= 1e4 && small <= 0.5 * big {
        lgamma(small) - ln_gamma_ratio(big, small)
    } else {
        lgamma(a) + lgamma(b) - lgamma(a + b)
    }
}

fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    (PI * r).sin()
}

/// (ln |Γ(x)|, sign Γ(x)) for any real x; `None` at the poles.
pub(crate) fn lgamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((lgamma(x), 1.0));
    }
    if x == x.floor() {
        return None;
    }
    let s = sin_pi(x);
    Some((PI.ln() - s.abs().ln() - lgamma(1.0 - x), s.signum()))
}

pub(crate) fn psi(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < POLY_SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r2 = 1.0 / (x * x);
    let series = r2
        * (1.0 / 12.0
            - r2 * (1.0 / 120.0
                - r2 * (1.0 / 252.0 - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32_760.0 - r2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("digamma", format!("x must be positive and finite, got {x}")));
    }
    Ok(psi(x))
}

pub(crate) fn psi1(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < POLY_SHIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r2
        * r
        * (1.0 / 6.0
            - r2 * (1.0 / 30.0
                - r2 * (1.0 / 42.0 - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
    acc + r + 0.5 * r2 + series
}

pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain("trigamma", format!("x must be positive and finite, got {x}")));
    }
    Ok(psi1(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-13);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-13);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!((ln_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.1).unwrap() - 2.252_712_651_734_206).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_factorials() {
        let mut lf = 0.0f64;
        for n in 1..170u32 {
            let got = ln_gamma(f64::from(n) + 1.0).unwrap();
            lf += f64::from(n).ln();
            assert!((got - lf).abs() <= 1e-13 * lf.max(1.0), "n = {n}");
        }
    }

    #[test]
    fn ratio_matches_direct_difference() {
        for &(x, a) in &[(2e4, 0.5), (5e6, 0.5), (1e5, 3.0), (3.0, 0.5)] {
            let direct = lgamma(x + a) - lgamma(x);
            let r = ln_gamma_ratio(x, a);
            assert!((r - direct).abs() < 1e-8 * direct.abs().max(1.0));
        }
        // Γ(x + 1/2)/Γ(x) ~ sqrt(x)(1 - 1/(8x))
        let x = 5e6;
        let expect = 0.5 * f64::ln(x) + (-1.0 / (8.0 * x) + 1.0 / (128.0 * x * x)).ln_1p();
        assert!((ln_gamma_ratio(x, 0.5) - expect).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
        assert!(trigamma(f64::NAN).is_err());
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + 0.577_215_664_901_532_9).abs() < 1e-12);
        assert!((digamma(0.5).unwrap() + 1.963_510_026_021_423_5).abs() < 1e-12);
        for &x in &[0.3, 2.0, 17.0] {
            let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((d - 1.0 / x).abs() < 1e-12);
        }
    }

    #[test]
    fn trigamma_values() {
        let pi2 = PI * PI;
        assert!((trigamma(1.0).unwrap() - pi2 / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5).unwrap() - pi2 / 2.0).abs() < 1e-12);
        let x = 3.0;
        assert!((trigamma(x + 1.0).unwrap() - (trigamma(x).unwrap() - 1.0 / (x * x))).abs() < 1e-12);
    }

    #[test]
    fn signed_gamma_reflection() {
        let (l, s) = lgamma_signed(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert!((l - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        assert!(lgamma_signed(-2.0).is_none());
        let (l, s) = lgamma_signed(-1.5).unwrap();
        assert_eq!(s, 1.0);
        assert!((l - (4.0 * PI.sqrt() / 3.0).ln()).abs() < 1e-13);
    }
}
