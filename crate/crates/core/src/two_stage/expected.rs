use rand_distr::{ChiSquared, Distribution};

use super::constants::h_tilde;
use super::optimal::{optimal_nu_with, NuMode};
use super::{Procedure, TwoStageProblem};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng::stream;
use crate::special::evd::chi2_cdf;
use crate::Numerics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleSizeMode {
    /// Σ max(N₀ + 1, (σ_i h/Δ)²), with the true σ_i in place of S_i.
    PlugIn,
    /// Σ E max(N₀ + 1, (h/Δ)² S_i²) with S_i² ~ σ_i² χ²_ν/ν.
    #[default]
    ChiSquareExact,
}

/// Expected total sample size over the k + 1 populations for the constant
/// h, ignoring the integer ceiling.
pub fn expected_sample_size(problem: &TwoStageProblem, h: f64, variances: &[f64], mode: SampleSizeMode) -> Result<f64> {
    problem.validate()?;
    if variances.len() as u64 != problem.k + 1 {
        return Err(Error::domain(
            "expected_sample_size",
            format!("expected {} variances, got {}", problem.k + 1, variances.len()),
        ));
    }
    if variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::domain("expected_sample_size", "variances must be positive"));
    }
    if !h.is_finite() {
        return Err(Error::domain("expected_sample_size", "h must be finite"));
    }
    let nu = problem.nu;
    if nu.is_infinite() && mode == SampleSizeMode::ChiSquareExact {
        return Err(Error::domain("expected_sample_size", "the chi-square form needs finite nu"));
    }
    let floor = problem.n0() + 1.0;
    let b = (h / problem.delta).powi(2);
    let mut total = 0.0;
    for &s2 in variances {
        total += match mode {
            SampleSizeMode::PlugIn => floor.max(b * s2),
            SampleSizeMode::ChiSquareExact => {
                if b == 0.0 {
                    floor
                } else {
                    let c = nu * floor / (b * s2);
                    floor * chi2_cdf(c, nu)? + b * s2 * (1.0 - chi2_cdf(c, nu + 2.0)?)
                }
            }
        };
    }
    Ok(total)
}

/// ν_k sequences for the optimality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuSequence {
    /// The approximate optimum ν̃*_k.
    Optimal,
    /// c ln k
    LnK(f64),
    /// c k^β
    PowK { coef: f64, exponent: f64 },
}

impl NuSequence {
    fn at(&self, k: u64, optimal: f64) -> f64 {
        let kf = k as f64;
        match *self {
            NuSequence::Optimal => optimal,
            NuSequence::LnK(c) => c * kf.ln(),
            NuSequence::PowK { coef, exponent } => coef * kf.powf(exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCheck {
    pub k: u64,
    pub nu_k: f64,
    pub nu_star: f64,
    /// Mean over draws of Ñ_{i,k} / Ñ_{i,k*}.
    pub ratio_mean: f64,
    pub ratio_min: f64,
    /// Mean over draws of Ñ_{i,k*} / (h̃(ν̃*)² σ²/Δ²).
    pub star_over_limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport {
    pub rows: Vec<KCheck>,
    /// Smallest mean ratio over the upper half of the k grid.
    pub liminf_proxy: f64,
}

impl OptimalityReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.liminf_proxy >= 1.0 - tolerance
    }
}

/// Simulates S² under ν_k and under ν̃*_k and compares the approximate
/// second-stage sizes max{ν + 2, h̃₁(ν)² S²/Δ²}. Draw r at grid point k uses
/// the same stream for both sequences, so identical sequences give ratio 1.
#[allow(clippy::too_many_arguments)]
pub fn approx_optimal_sample_check(
    k_grid: &[u64],
    sigma2: f64,
    delta: f64,
    p: f64,
    nu_sequence: NuSequence,
    draws: u64,
    seed: u64,
    exec: Execution,
) -> Result<OptimalityReport> {
    if !(sigma2 > 0.0 && delta > 0.0) {
        return Err(Error::domain("approx_optimal_sample_check", "sigma2 and delta must be positive"));
    }
    if 2.0 * std::f64::consts::E * sigma2 <= delta * delta {
        return Err(Error::domain("approx_optimal_sample_check", "requires 2e sigma2 > delta^2"));
    }
    if k_grid.is_empty() || draws == 0 {
        return Err(Error::domain("approx_optimal_sample_check", "need a non-empty grid and at least one draw"));
    }
    let numerics = Numerics::default();
    let mut rows = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let nu_star =
            optimal_nu_with(k, p, NuMode::Approx, &[sigma2], delta, &numerics)?.nu_approx.expect("approximate mode");
        let nu_k = nu_sequence.at(k, nu_star);
        if !(nu_k >= 1.0) {
            return Err(Error::domain("approx_optimal_sample_check", format!("nu_k = {nu_k} < 1 at k = {k}")));
        }
        let h_k = h_tilde(&TwoStageProblem::new(k, nu_k, p, delta)?, Procedure::DudewiczDalal)?;
        let h_star = h_tilde(&TwoStageProblem::new(k, nu_star, p, delta)?, Procedure::DudewiczDalal)?;
        let chi_k = ChiSquared::new(nu_k).map_err(|e| Error::domain("approx_optimal_sample_check", e.to_string()))?;
        let chi_star =
            ChiSquared::new(nu_star).map_err(|e| Error::domain("approx_optimal_sample_check", e.to_string()))?;
        let limit = h_star * h_star * sigma2 / (delta * delta);
        let pairs = exec.map_range(draws, |r| {
            let s2_k = sigma2 * chi_k.sample(&mut stream(seed, r, k)) / nu_k;
            let s2_star = sigma2 * chi_star.sample(&mut stream(seed, r, k)) / nu_star;
            let n_k = (nu_k + 2.0).max(h_k * h_k * s2_k / (delta * delta));
            let n_star = (nu_star + 2.0).max(h_star * h_star * s2_star / (delta * delta));
            (n_k / n_star, n_star / limit)
        });
        let n = draws as f64;
        rows.push(KCheck {
            k,
            nu_k,
            nu_star,
            ratio_mean: pairs.iter().map(|x| x.0).sum::<f64>() / n,
            ratio_min: pairs.iter().map(|x| x.0).fold(f64::INFINITY, f64::min),
            star_over_limit: pairs.iter().map(|x| x.1).sum::<f64>() / n,
        });
    }
    let tail = &rows[rows.len() / 2..];
    let liminf_proxy = tail.iter().map(|r| r.ratio_mean).fold(f64::INFINITY, f64::min);
    Ok(OptimalityReport { rows, liminf_proxy })
}
