//! Bracketing root finders for monotone scalar equations.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200 }
    }
}

/// Outcome of a root solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResult {
    pub value: f64,
    /// Equation residual at `value`.
    pub residual: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub bracket: (f64, f64),
    /// Set when the root falls outside the regime the caller normally
    /// expects, e.g. a non-positive h or a sample size below one.
    pub flagged: bool,
}

/// Brent's method on a sign-changing bracket [a, b].
pub fn brent<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, cfg: &RootConfig) -> Result<SolveResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(SolveResult {
            value: a,
            residual: 0.0,
            iterations: 0,
            evaluations: 0,
            bracket: (a, a),
            flagged: false,
        });
    }
    if fb == 0.0 {
        return Ok(SolveResult {
            value: b,
            residual: 0.0,
            iterations: 0,
            evaluations: 0,
            bracket: (b, b),
            flagged: false,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket("brent: end points do not straddle a root"));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=cfg.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * cfg.tol * b.abs().max(1.0);
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(SolveResult {
                value: b,
                residual: fb,
                iterations: iter,
                evaluations: iter - 1,
                bracket: (lo, hi),
                flagged: false,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::NonFinite("brent: function value"));
        }
    }
    Err(Error::NoConvergence { func: "brent", iterations: cfg.max_iter })
}

/// Root of an increasing function, bracketed by geometric expansion from
/// `seed` with initial step `step`. Optional bounds keep the search inside
/// an open interval (lower, upper).
pub fn solve_increasing<F>(
    mut f: F,
    seed: f64,
    step: f64,
    lower: Option<f64>,
    upper: Option<f64>,
    cfg: &RootConfig,
    name: &'static str,
) -> Result<SolveResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x0 = seed;
    let mut f0 = f(x0)?;
    let mut evaluations = 1;
    if f0 == 0.0 {
        return Ok(SolveResult {
            value: x0,
            residual: 0.0,
            iterations: 0,
            evaluations,
            bracket: (x0, x0),
            flagged: false,
        });
    }
    let mut step = step.abs().max(f64::MIN_POSITIVE);
    let up = f0 < 0.0;
    for _ in 0..400 {
        let mut x1 = if up { x0 + step } else { x0 - step };
        if let (true, Some(u)) = (up, upper) {
            if x1 >= u {
                x1 = 0.5 * (x0 + u);
            }
        }
        if let (false, Some(l)) = (up, lower) {
            if x1 <= l {
                x1 = 0.5 * (x0 + l);
            }
        }
        let f1 = f(x1)?;
        evaluations += 1;
        if !f1.is_finite() {
            return Err(Error::NonFinite(name));
        }
        if f1 == 0.0 || f1.signum() != f0.signum() {
            let (a, b, fa, fb) = if up { (x0, x1, f0, f1) } else { (x1, x0, f1, f0) };
            let mut r = brent(&mut f, a, b, fa, fb, cfg)?;
            r.evaluations += evaluations;
            return Ok(r);
        }
        if x1 == x0 {
            break;
        }
        x0 = x1;
        f0 = f1;
        step *= 2.0;
    }
    Err(Error::Bracket(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let r =
            solve_increasing(|x| Ok(x * x * x - 2.0), 0.0, 1.0, None, None, &RootConfig::default(), "cube").unwrap();
        assert!((r.value - 2f64.cbrt()).abs() < 1e-10);
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn respects_lower_bound() {
        let cfg = RootConfig { tol: 1e-14, max_iter: 200 };
        let r = solve_increasing(|x: f64| Ok(x.ln() + 20.0), 1.0, 1.0, Some(0.0), None, &cfg, "log").unwrap();
        assert!(r.value > 0.0 && (r.value - (-20f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_bad_bracket() {
        assert!(brent(Ok, 1.0, 2.0, 1.0, 2.0, &RootConfig::default()).is_err());
    }
}
