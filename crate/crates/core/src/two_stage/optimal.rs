use super::constants::{h_tilde, solve_h1_with};
use super::{Procedure, TwoStageProblem};
use crate::error::{Error, Result};
use crate::roots::{brent, solve_increasing};
use crate::special::gamma::{lgamma, psi};
use crate::Numerics;

/// Derivative criterion for the approximate constant:
/// d ln h̃₁(ν)/dν = 𝓗_k(ν) / (2ν²), so 𝓗_k(ν) = 0 minimises h̃₁ over ν.
pub fn h_nu_criterion(k: u64, p: f64, nu: f64) -> Result<f64> {
    if k < 1 || !(p > 0.0 && p < 1.0) || !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::domain("h_nu_criterion", "need k >= 1, p in (0, 1) and finite nu > 0"));
    }
    let lead = -(k as f64) / (std::f64::consts::PI.sqrt() * p.ln());
    Ok(-2.0 - 2.0 * lead.ln()
        + nu
        + 2.0 * nu.ln()
        + 2.0 * (lgamma(0.5 * nu) - lgamma(0.5 * (nu + 1.0)))
        + nu * (psi(0.5 * (nu + 1.0)) - psi(0.5 * nu)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuMode {
    /// Minimiser of the Fréchet approximation h̃₁(ν).
    Approx,
    /// Solution of ν + 2 = h₁(ν)².
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuChoice {
    pub nu_approx: Option<f64>,
    pub nu_exact: Option<f64>,
    /// h̃₁ at the approximate choice, or the solved h₁ at the exact one.
    pub h_at_choice: f64,
    /// h² Σσ²/Δ² for the supplied variances.
    pub mu_tilde: f64,
}

impl NuChoice {
    /// Integer first-stage size ⌈ν⌉ + 1 for the chosen ν.
    pub fn n0(&self) -> u64 {
        let nu = self.nu_exact.or(self.nu_approx).unwrap_or(1.0);
        nu.ceil() as u64 + 1
    }
}

pub fn optimal_nu(k: u64, p: f64, mode: NuMode, variances: &[f64], delta: f64) -> Result<NuChoice> {
    optimal_nu_with(k, p, mode, variances, delta, &Numerics::default())
}

pub fn optimal_nu_with(
    k: u64,
    p: f64,
    mode: NuMode,
    variances: &[f64],
    delta: f64,
    numerics: &Numerics,
) -> Result<NuChoice> {
    if k < 2 {
        return Err(Error::KTooSmall { k, reason: "optimal nu needs k >= 2".into() });
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("optimal_nu", format!("delta must be positive, got {delta}")));
    }
    if variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::domain("optimal_nu", "variances must be positive"));
    }
    let scale: f64 = variances.iter().sum::<f64>() / (delta * delta);
    match mode {
        NuMode::Approx => {
            let h_at_one = h_nu_criterion(k, p, 1.0)?;
            if h_at_one >= 0.0 {
                return Err(Error::KTooSmall {
                    k,
                    reason: format!("the optimality criterion is already non-negative at nu = 1 ({h_at_one:.4})"),
                });
            }
            let mut hi = 2.0;
            let mut f_hi = h_nu_criterion(k, p, hi)?;
            while f_hi < 0.0 {
                hi *= 2.0;
                f_hi = h_nu_criterion(k, p, hi)?;
            }
            let root = brent(|nu| h_nu_criterion(k, p, nu), 1.0, hi, h_at_one, f_hi, &numerics.root)?;
            let nu = root.value;
            let h = h_tilde(&TwoStageProblem::new(k, nu, p, delta)?, Procedure::DudewiczDalal)?;
            Ok(NuChoice { nu_approx: Some(nu), nu_exact: None, h_at_choice: h, mu_tilde: h * h * scale })
        }
        NuMode::Exact => {
            let h1 = |nu: f64| -> Result<f64> {
                Ok(solve_h1_with(&TwoStageProblem::new(k, nu, p, delta)?, numerics)?.value)
            };
            let at_one = 3.0 - h1(1.0)?.powi(2);
            if at_one >= 0.0 {
                return Err(Error::KTooSmall { k, reason: "nu + 2 already exceeds h1(nu)^2 at nu = 1".into() });
            }
            let seed = (2.0 * (k as f64).ln()).max(2.0);
            let root = solve_increasing(
                |nu| Ok(nu + 2.0 - h1(nu)?.powi(2)),
                seed,
                0.25 * seed,
                Some(1.0),
                None,
                &numerics.root,
                "optimal nu",
            )?;
            let nu = root.value;
            let h = h1(nu)?;
            Ok(NuChoice { nu_approx: None, nu_exact: Some(nu), h_at_choice: h, mu_tilde: h * h * scale })
        }
    }
}
