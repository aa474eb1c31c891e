//! Single-stage selection of the s best of k Gaussian populations with a
//! common known variance.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_points, QuadConfig};
use crate::roots::{solve_increasing, SolveResult};
use crate::special::gamma::lgamma;
use crate::special::normal::{ln_ncdf, qnorm_upper};
use crate::Numerics;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleStageProblem {
    pub k: u64,
    pub s: u64,
    pub delta: f64,
    pub sigma2: f64,
    pub p: f64,
}

impl SingleStageProblem {
    pub fn new(k: u64, s: u64, delta: f64, sigma2: f64, p: f64) -> Result<Self> {
        let problem = Self { k, s, delta, sigma2, p };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::domain("SingleStageProblem", format!("k must be at least 2, got {}", self.k)));
        }
        if self.s < 1 || 2 * self.s > self.k {
            return Err(Error::domain(
                "SingleStageProblem",
                format!("need 1 <= s <= k - s, got s = {}, k = {}", self.s, self.k),
            ));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::domain("SingleStageProblem", format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::domain("SingleStageProblem", format!("sigma2 must be positive, got {}", self.sigma2)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain("SingleStageProblem", format!("p must lie in (0, 1), got {}", self.p)));
        }
        Ok(())
    }

    /// Standardised mean gap Δ√n/σ.
    pub fn shift(&self, n: f64) -> f64 {
        self.delta * n.sqrt() / self.sigma2.sqrt()
    }

    /// Probability of a correct selection with zero separation, 1/C(k, s).
    pub fn chance_level(&self) -> f64 {
        let (k, s) = (self.k as f64, self.s as f64);
        (lgamma(s + 1.0) + lgamma(k - s + 1.0) - lgamma(k + 1.0)).exp()
    }
}

/// Least favourable configuration: k − s means at c and s means at c + Δ,
/// in ascending order.
pub fn lfc(problem: &SingleStageProblem, c: f64) -> Vec<f64> {
    let cut = problem.k - problem.s;
    (0..problem.k).map(|i| if i < cut { c } else { c + problem.delta }).collect()
}

/// Median of the maximum of m standard Gaussians.
fn max_median(m: u64) -> f64 {
    qnorm_upper(-(std::f64::consts::LN_2 / -(m as f64)).exp_m1())
}

/// P(every one of `superior` N(x, 1) variables exceeds all of `inferior`
/// N(0, 1) variables), i.e. ∫ Φ^inf(x − t) · sup · Φ^(sup−1)(t) φ(t) dt.
pub fn selection_probability(inferior: u64, superior: u64, shift: f64, cfg: &QuadConfig) -> Result<f64> {
    if inferior == 0 || superior == 0 {
        return Err(Error::domain("selection_probability", "both groups must be non-empty"));
    }
    if shift.is_nan() {
        return Err(Error::domain("selection_probability", "shift is NaN"));
    }
    if shift == f64::INFINITY {
        return Ok(1.0);
    }
    let (ni, ns) = (inferior as f64, superior as f64);
    let ln_ns = ns.ln();
    let integrand = |t: f64| {
        let log = ni * ln_ncdf(shift - t) + ln_ns + (ns - 1.0) * ln_ncdf(t) - 0.5 * t * t - LN_SQRT_2PI;
        log.exp()
    };
    let centre_sup = max_median(superior);
    let centre_inf = shift - max_median(inferior);
    let lo = centre_sup.min(centre_inf);
    let hi = centre_sup.max(centre_inf);
    let points = [f64::NEG_INFINITY, lo - 1.0, centre_sup, centre_inf, hi + 1.0, f64::INFINITY];
    let r = integrate_points(integrand, &points, cfg)?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// P(CS) with n observations per population.
pub fn pcs(problem: &SingleStageProblem, n: f64) -> Result<f64> {
    pcs_with(problem, n, &QuadConfig::default())
}

pub fn pcs_with(problem: &SingleStageProblem, n: f64, cfg: &QuadConfig) -> Result<f64> {
    problem.validate()?;
    if !(n >= 0.0) {
        return Err(Error::domain("pcs", format!("n must be non-negative, got {n}")));
    }
    selection_probability(problem.k - problem.s, problem.s, problem.shift(n), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Ceil,
    Nearest,
}

/// s = max(1, round(½ k^α)); the limit of ln s / ln(k − s) is α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SRule {
    pub alpha: f64,
    pub rounding: Rounding,
}

impl SRule {
    pub fn half_sqrt(rounding: Rounding) -> Self {
        Self { alpha: 0.5, rounding }
    }

    pub fn select(&self, k: u64) -> u64 {
        let raw = 0.5 * (k as f64).powf(self.alpha);
        let s = match self.rounding {
            Rounding::Ceil => raw.ceil(),
            Rounding::Nearest => raw.round(),
        };
        (s as u64).max(1)
    }

    pub fn limit_c(&self) -> f64 {
        self.alpha
    }
}

/// Which constant C enters Ñ = 2σ²(1 + √C)²/Δ² · ln(·).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticForm {
    /// C = ln s / ln(k − s) at the given k, multiplied by ln(k − s).
    FiniteK,
    /// A fixed limit C, multiplied by ln k.
    Limit(f64),
}

pub fn asymptotic_sample_size(problem: &SingleStageProblem, form: AsymptoticForm) -> f64 {
    let rest = (problem.k - problem.s) as f64;
    let (c, log) = match form {
        AsymptoticForm::FiniteK => {
            let c = if problem.s == 1 { 0.0 } else { (problem.s as f64).ln() / rest.ln() };
            (c, rest.ln())
        }
        AsymptoticForm::Limit(c) => (c, (problem.k as f64).ln()),
    };
    2.0 * problem.sigma2 * (1.0 + c.sqrt()).powi(2) / (problem.delta * problem.delta) * log
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSizeResult {
    pub n_exact: f64,
    pub n_asymptotic: f64,
    /// (Ñ − N)/N
    pub relative_error: f64,
    /// Root-finding record; `value` is n, `residual` is P(CS) − p, and
    /// `flagged` marks n < 1.
    pub diagnostics: SolveResult,
}

pub fn solve_sample_size(problem: &SingleStageProblem) -> Result<SampleSizeResult> {
    solve_sample_size_with(problem, AsymptoticForm::FiniteK, &Numerics::default())
}

/// Continuous n with P(CS) = p, solved in the standardised shift Δ√n/σ.
pub fn solve_sample_size_with(
    problem: &SingleStageProblem,
    form: AsymptoticForm,
    numerics: &Numerics,
) -> Result<SampleSizeResult> {
    problem.validate()?;
    let at_zero = problem.chance_level();
    if problem.p <= at_zero {
        return Err(Error::TrivialSampleSize { p: problem.p, at_zero });
    }
    let inferior = problem.k - problem.s;
    let n_asymptotic = asymptotic_sample_size(problem, form);
    let seed = problem.shift(n_asymptotic).max(1.0);
    let quad = numerics.quad;
    let mut root = solve_increasing(
        |x| Ok(selection_probability(inferior, problem.s, x, &quad)? - problem.p),
        seed,
        0.5,
        Some(0.0),
        None,
        &numerics.root,
        "single-stage sample size",
    )?;
    let scale = problem.sigma2 / (problem.delta * problem.delta);
    let n_exact = root.value * root.value * scale;
    root.value = n_exact;
    root.bracket = (root.bracket.0.powi(2) * scale, root.bracket.1.powi(2) * scale);
    root.flagged = n_exact < 1.0;
    Ok(SampleSizeResult {
        n_exact,
        n_asymptotic,
        relative_error: (n_asymptotic - n_exact) / n_exact,
        diagnostics: root,
    })
}
