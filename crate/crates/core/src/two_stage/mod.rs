//! Constants of the two-stage Dudewicz–Dalal and Rinott procedures, their
//! heavy-tail asymptotics, and the choice of first-stage size.
//!
//! With T_0, …, T_k i.i.d. t_ν:
//! f₁(h) = P(max_{j≤k} T_j − T_0 ≤ h) = ∫ G^k(t + h) g(t) dt,
//! f₂(h) = P(T_1 − T_0 ≤ h)^k.

mod constants;
mod expected;
mod optimal;

pub use constants::{
    f1, f1_with, f2, f2_with, h2_gaussian_limit, h_gaussian_asymptotic, h_tilde, ratio_sq_limit, solve_h, solve_h1,
    solve_h1_with, solve_h2, solve_h2_with, solve_h_with, HConstants,
};
pub use expected::{
    approx_optimal_sample_check, expected_sample_size, KCheck, NuSequence, OptimalityReport, SampleSizeMode,
};
pub use optimal::{h_nu_criterion, optimal_nu, optimal_nu_with, NuChoice, NuMode};

use crate::error::{Error, Result};

/// Which of the two procedures a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Procedure {
    /// Weighted means; constant h₁ from f₁.
    DudewiczDalal,
    /// Plain means; constant h₂ from f₂.
    Rinott,
}

/// k competitors (k + 1 populations), ν = N₀ − 1 first-stage degrees of
/// freedom, target probability p and indifference width Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageProblem {
    pub k: u64,
    pub nu: f64,
    pub p: f64,
    pub delta: f64,
}

impl TwoStageProblem {
    pub fn new(k: u64, nu: f64, p: f64, delta: f64) -> Result<Self> {
        let problem = Self { k, nu, p, delta };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::domain("TwoStageProblem", "k must be at least 1"));
        }
        if !(self.nu >= 1.0) {
            return Err(Error::domain("TwoStageProblem", format!("nu must be at least 1, got {}", self.nu)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain("TwoStageProblem", format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::domain("TwoStageProblem", format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }

    /// First-stage sample size N₀ = ν + 1.
    pub fn n0(&self) -> f64 {
        self.nu + 1.0
    }
}
