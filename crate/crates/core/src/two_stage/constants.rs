use super::{Procedure, TwoStageProblem};
use crate::error::{Error, Result};
use crate::extreme_values::gamma_nu;
use crate::quadrature::{integrate_points, QuadConfig};
use crate::roots::{solve_increasing, SolveResult};
use crate::special::evd::frechet_quantile_unchecked;
use crate::special::normal::qnorm_upper;
use crate::special::StudentT;
use crate::Numerics;

fn kernel(nu: f64) -> Result<StudentT> {
    if !(nu > 0.0) {
        return Err(Error::domain("two-stage kernel", format!("nu must be positive, got {nu}")));
    }
    StudentT::new(nu)
}

pub fn f1(h: f64, k: u64, nu: f64) -> Result<f64> {
    f1_with(h, k, nu, &QuadConfig::default())
}

/// ∫ G_ν^k(t + h) g_ν(t) dt, with the power taken in the log domain.
pub fn f1_with(h: f64, k: u64, nu: f64, cfg: &QuadConfig) -> Result<f64> {
    if k < 1 || h.is_nan() {
        return Err(Error::domain("f1", "need k >= 1 and a numeric h"));
    }
    let dist = kernel(nu)?;
    let kf = k as f64;
    let integrand = |t: f64| (kf * dist.ln_cdf(t + h) + dist.ln_pdf(t)).exp();
    let mut points = vec![f64::NEG_INFINITY, 0.0, f64::INFINITY];
    if k > 1 {
        // G^k(t + h) switches on around the 1 − 1/k quantile
        let u = dist.quantile_upper(1.0 / kf);
        points.extend([0.5 * u - h, u - h, 2.0 * u - h]);
    } else {
        points.push(-h);
    }
    let r = integrate_points(integrand, &points, cfg)?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// P(T_1 − T_0 > h), integrated with a purely relative tolerance.
fn pair_sf(h: f64, dist: &StudentT, cfg: &QuadConfig) -> Result<f64> {
    let integrand = |t: f64| (dist.ln_sf(t + h) + dist.ln_pdf(t)).exp();
    let rel = QuadConfig { abs_tol: 0.0, rel_tol: cfg.rel_tol.min(1e-10), max_subdivisions: cfg.max_subdivisions };
    let points = [f64::NEG_INFINITY, -h, -0.5 * h, 0.0, f64::INFINITY];
    Ok(integrate_points(integrand, &points, &rel)?.value)
}

pub fn f2(h: f64, k: u64, nu: f64) -> Result<f64> {
    f2_with(h, k, nu, &QuadConfig::default())
}

/// [∫ G_ν(t + h) g_ν(t) dt]^k, computed as (1 − S(h))^k from the upper tail
/// S(h) so that values of the base near one keep full precision.
pub fn f2_with(h: f64, k: u64, nu: f64, cfg: &QuadConfig) -> Result<f64> {
    if k < 1 || h.is_nan() {
        return Err(Error::domain("f2", "need k >= 1 and a numeric h"));
    }
    let dist = kernel(nu)?;
    let s = pair_sf(h, &dist, cfg)?;
    Ok((k as f64 * (-s).ln_1p()).exp().clamp(0.0, 1.0))
}

/// Fréchet-based approximation γ_ν k^(1/ν) q_p, times 2^(1/ν) for Rinott.
pub fn h_tilde(problem: &TwoStageProblem, which: Procedure) -> Result<f64> {
    problem.validate()?;
    let nu = problem.nu;
    if nu.is_infinite() {
        return Err(Error::domain("h_tilde", "the Fréchet approximation needs finite nu"));
    }
    let base = gamma_nu(nu)? * (problem.k as f64).powf(1.0 / nu) * frechet_quantile_unchecked(problem.p, nu);
    Ok(match which {
        Procedure::DudewiczDalal => base,
        Procedure::Rinott => 2f64.powf(1.0 / nu) * base,
    })
}

/// Gaussian-limit growth: √(2 ln k) for Dudewicz–Dalal, 2√(ln k) for Rinott.
pub fn h_gaussian_asymptotic(k: u64, which: Procedure) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("h_gaussian_asymptotic", "k must be at least 2"));
    }
    let l = (k as f64).ln();
    Ok(match which {
        Procedure::DudewiczDalal => (2.0 * l).sqrt(),
        Procedure::Rinott => 2.0 * l.sqrt(),
    })
}

/// √2 Φ⁻¹(p^(1/k)), the exact Rinott constant for known variances.
pub fn h2_gaussian_limit(k: u64, p: f64) -> Result<f64> {
    if k < 1 || !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("h2_gaussian_limit", "need k >= 1 and p in (0, 1)"));
    }
    Ok(std::f64::consts::SQRT_2 * qnorm_upper(-(p.ln() / k as f64).exp_m1()))
}

/// Limit of (h₂/h₁)² as k → ∞.
pub fn ratio_sq_limit(nu: f64) -> f64 {
    if nu.is_infinite() {
        2.0
    } else {
        2f64.powf(2.0 / nu)
    }
}

/// Above this ν the Fréchet seed overshoots badly and the Gaussian one is used.
const FRECHET_SEED_MAX_NU: f64 = 100.0;

fn seed_for(problem: &TwoStageProblem, which: Procedure) -> f64 {
    if problem.nu <= FRECHET_SEED_MAX_NU && problem.k > 1 {
        if let Ok(h) = h_tilde(problem, which) {
            if h.is_finite() {
                return h;
            }
        }
    }
    if problem.k > 1 {
        let l = (problem.k as f64).ln();
        return match which {
            Procedure::DudewiczDalal => (2.0 * l).sqrt(),
            Procedure::Rinott => 2.0 * l.sqrt(),
        };
    }
    0.0
}

fn exact_zero() -> SolveResult {
    SolveResult { value: 0.0, residual: 0.0, iterations: 0, evaluations: 0, bracket: (0.0, 0.0), flagged: true }
}

fn finish(mut r: SolveResult) -> SolveResult {
    r.flagged = r.value <= 0.0;
    r
}

pub fn solve_h1(problem: &TwoStageProblem) -> Result<SolveResult> {
    solve_h1_with(problem, &Numerics::default())
}

/// Root of f₁(h) = p; `flagged` marks h ≤ 0.
pub fn solve_h1_with(problem: &TwoStageProblem, numerics: &Numerics) -> Result<SolveResult> {
    problem.validate()?;
    if problem.k == 1 && problem.p == 0.5 {
        return Ok(exact_zero());
    }
    let seed = seed_for(problem, Procedure::DudewiczDalal);
    let quad = numerics.quad;
    let r = solve_increasing(
        |h| Ok(f1_with(h, problem.k, problem.nu, &quad)? - problem.p),
        seed,
        (0.25 * seed.abs()).max(0.5),
        None,
        None,
        &numerics.root,
        "h1",
    )?;
    Ok(finish(r))
}

pub fn solve_h2(problem: &TwoStageProblem) -> Result<SolveResult> {
    solve_h2_with(problem, &Numerics::default())
}

/// Root of f₂(h) = p, solved as ln S(h) = ln(1 − p^(1/k)); the reported
/// residual is f₂(h) − p.
pub fn solve_h2_with(problem: &TwoStageProblem, numerics: &Numerics) -> Result<SolveResult> {
    problem.validate()?;
    if problem.k == 1 && problem.p == 0.5 {
        return Ok(exact_zero());
    }
    let dist = kernel(problem.nu)?;
    let target = (-(problem.p.ln() / problem.k as f64).exp_m1()).ln();
    let seed = seed_for(problem, Procedure::Rinott);
    let quad = numerics.quad;
    let mut r = solve_increasing(
        // clamp so that an underflowed tail still reads as "h too large"
        |h| Ok(target - pair_sf(h, &dist, &quad)?.max(f64::MIN_POSITIVE).ln()),
        seed,
        (0.25 * seed.abs()).max(0.5),
        None,
        None,
        &numerics.root,
        "h2",
    )?;
    r.residual = f2_with(r.value, problem.k, problem.nu, &quad)? - problem.p;
    Ok(finish(r))
}

/// Both constants with their approximations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HConstants {
    pub h1: f64,
    pub h2: f64,
    pub h1_tilde: f64,
    pub h2_tilde: f64,
    /// (h₂/h₁)²
    pub ratio_sq: f64,
}

impl HConstants {
    /// Certified range [h₁, h₂] for Rinott's exact constant.
    pub fn rinott_bounds(&self) -> (f64, f64) {
        (self.h1, self.h2)
    }

    pub fn h1_rel_err(&self) -> f64 {
        (self.h1_tilde - self.h1) / self.h1
    }

    pub fn h2_rel_err(&self) -> f64 {
        (self.h2_tilde - self.h2) / self.h2
    }
}

pub fn solve_h(problem: &TwoStageProblem) -> Result<HConstants> {
    solve_h_with(problem, &Numerics::default())
}

/// h₁, h₂ and the approximations. For ν = ∞ the approximations are the
/// Gaussian growth rates. Checks h₁ ≤ h₂.
pub fn solve_h_with(problem: &TwoStageProblem, numerics: &Numerics) -> Result<HConstants> {
    let h1 = solve_h1_with(problem, numerics)?.value;
    let h2 = solve_h2_with(problem, numerics)?.value;
    let (h1_tilde, h2_tilde) = if problem.nu.is_finite() {
        (h_tilde(problem, Procedure::DudewiczDalal)?, h_tilde(problem, Procedure::Rinott)?)
    } else if problem.k >= 2 {
        (
            h_gaussian_asymptotic(problem.k, Procedure::DudewiczDalal)?,
            h_gaussian_asymptotic(problem.k, Procedure::Rinott)?,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let slack = 1e-8 * h2.abs().max(1.0);
    if h1 > h2 + slack {
        return Err(Error::PostCondition(format!("h1 = {h1} exceeds h2 = {h2}")));
    }
    let ratio_sq = if h1 == 0.0 { f64::NAN } else { (h2 / h1).powi(2) };
    Ok(HConstants { h1, h2, h1_tilde, h2_tilde, ratio_sq })
}
