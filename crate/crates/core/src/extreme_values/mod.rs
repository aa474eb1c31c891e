//! Extreme-value normalising constants and limit laws for linear
//! combinations of partial maxima.
//!
//! The convention throughout is a_k (max − b_k) → Y, so a_k multiplies.
//! Gaussian maxima have a_k → ∞ with Gumbel Y; Student-t maxima have
//! a_k → 0 with Fréchet Y.

mod asymptotic;
mod limit;
mod mc;

pub use limit::{
    limit_combo_cdf, limit_combo_cdf_with, BaseFamily, ComponentLaw, GroupKind, Growth, LimitCombinationSpec,
    LimitLawResult, Route, SeqTerm, VComponent,
};
pub use mc::{mc_partial_maxima, mc_partial_maxima_with, McEstimate};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::StudentT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvtFamily {
    GaussianGumbel,
    StudentFrechet,
    /// Maxima of sums of two independent t variables.
    TwoTSumFrechet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvtConstants {
    pub a_k: f64,
    pub b_k: f64,
    pub family: EvtFamily,
}

pub(crate) fn gaussian_a(n: f64) -> f64 {
    (2.0 * n.ln()).sqrt()
}

pub(crate) fn gaussian_b(n: f64) -> f64 {
    let a = gaussian_a(n);
    a - (n.ln().ln() + (4.0 * PI).ln()) / (2.0 * a)
}

/// a_k = √(2 ln k), b_k = a_k − (ln ln k + ln 4π)/(2 a_k).
pub fn gaussian_norm_constants(k: u64) -> Result<EvtConstants> {
    if k < 2 {
        return Err(Error::domain("gaussian_norm_constants", "k must be at least 2"));
    }
    let n = k as f64;
    Ok(EvtConstants { a_k: gaussian_a(n), b_k: gaussian_b(n), family: EvtFamily::GaussianGumbel })
}

/// γ_ν with P(T > t) ~ γ_ν^ν t^(−ν) for T ~ t_ν.
pub fn gamma_nu(nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::domain("gamma_nu", format!("degrees of freedom must be positive and finite, got {nu}")));
    }
    Ok((StudentT::new(nu)?.ln_tail_constant() / nu).exp())
}

/// a_k = γ_ν^(−1) k^(−1/ν), b_k = 0. With `summed`, the constants for
/// maxima of T₁ + T₂, whose tail is twice as heavy.
pub fn student_norm_constants(k: u64, nu: f64, summed: bool) -> Result<EvtConstants> {
    if k < 1 {
        return Err(Error::domain("student_norm_constants", "k must be at least 1"));
    }
    let g = gamma_nu(nu)?;
    let mut a_k = (k as f64).powf(-1.0 / nu) / g;
    let family = if summed {
        a_k *= 2f64.powf(-1.0 / nu);
        EvtFamily::TwoTSumFrechet
    } else {
        EvtFamily::StudentFrechet
    };
    Ok(EvtConstants { a_k, b_k: 0.0, family })
}
