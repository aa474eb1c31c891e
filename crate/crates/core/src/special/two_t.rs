//! Density of the sum of two independent Student-t variables.

use super::gamma::lgamma;
use super::hypergeometric::gauss_hypergeometric;
use crate::error::{Error, Result};

/// Density of T₁ + T₂ for independent t_ν variables:
///
/// g̃(t) = C · w^((ν+1)/2) · ₂F₁((ν+1)/2, (1−ν)/2; ν/2+1; 1−w), w = 4ν/(4ν+t²)
///
/// with C = Γ((ν+1)/2) Γ(ν+½) / (2^ν √ν Γ(ν/2)² Γ(ν/2+1)).
pub fn two_t_sum_pdf(t: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) || nu.is_infinite() {
        return Err(Error::domain(
            "two_t_sum_pdf",
            format!("degrees of freedom must be positive and finite, got {nu}"),
        ));
    }
    let r = t * t / (4.0 * nu);
    let ln_w = -r.ln_1p();
    let z = r / (1.0 + r);
    let ln_c = lgamma(0.5 * (nu + 1.0)) + lgamma(nu + 0.5)
        - nu * std::f64::consts::LN_2
        - 0.5 * nu.ln()
        - 2.0 * lgamma(0.5 * nu)
        - lgamma(0.5 * nu + 1.0);
    let f = gauss_hypergeometric(0.5 * (nu + 1.0), 0.5 * (1.0 - nu), 0.5 * nu + 1.0, z)?;
    Ok((ln_c + 0.5 * (nu + 1.0) * ln_w).exp() * f)
}
