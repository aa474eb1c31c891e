//! Fréchet and Gumbel extreme-value laws and the chi-square c.d.f.

use super::incomplete::regularized_gamma_p;
use crate::error::{Error, Result};

fn check_shape(func: &'static str, nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("shape must be positive and finite, got {nu}")))
    }
}

fn check_prob(func: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(func, format!("p must lie in (0, 1), got {p}")))
    }
}

/// exp(−x^(−ν)) for x > 0, zero otherwise.
pub fn frechet_cdf(x: f64, nu: f64) -> Result<f64> {
    check_shape("frechet_cdf", nu)?;
    Ok(frechet_cdf_unchecked(x, nu))
}

pub(crate) fn frechet_cdf_unchecked(x: f64, nu: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-x.powf(-nu)).exp()
    }
}

pub fn frechet_pdf(x: f64, nu: f64) -> Result<f64> {
    check_shape("frechet_pdf", nu)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let xm = x.powf(-nu);
    Ok(nu * xm / x * (-xm).exp())
}

/// q_p = (−ln p)^(−1/ν).
pub fn frechet_quantile(p: f64, nu: f64) -> Result<f64> {
    check_shape("frechet_quantile", nu)?;
    check_prob("frechet_quantile", p)?;
    Ok(frechet_quantile_unchecked(p, nu))
}

pub(crate) fn frechet_quantile_unchecked(p: f64, nu: f64) -> f64 {
    (-p.ln()).powf(-1.0 / nu)
}

pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

pub fn gumbel_pdf(x: f64) -> f64 {
    let e = (-x).exp();
    e * (-e).exp()
}

pub fn gumbel_quantile(p: f64) -> Result<f64> {
    check_prob("gumbel_quantile", p)?;
    Ok(-(-p.ln()).ln())
}

pub fn chi2_cdf(x: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) || nu.is_infinite() {
        return Err(Error::domain("chi2_cdf", format!("degrees of freedom must be positive, got {nu}")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("chi2_cdf", format!("x must be non-negative, got {x}")));
    }
    Ok(regularized_gamma_p(0.5 * nu, 0.5 * x))
}
