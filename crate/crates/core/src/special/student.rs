use std::f64::consts::PI;

use super::gamma::ln_gamma_ratio;
use super::incomplete::beta_tails;
use super::normal::{ln_ncdf, normal_cdf, normal_pdf, qnorm, qnorm_upper, DistributionEval};
use crate::error::{Error, Result};

const LN_HALF: f64 = -std::f64::consts::LN_2;

/// Student's t distribution with ν > 0 degrees of freedom. ν may be
/// fractional; ν = +∞ is the standard Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentT {
    nu: f64,
    ln_norm: f64,
}

impl StudentT {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::domain("StudentT", format!("degrees of freedom must be positive, got {nu}")));
        }
        let ln_norm = if nu.is_infinite() {
            -0.5 * (2.0 * PI).ln()
        } else {
            ln_gamma_ratio(0.5 * nu, 0.5) - 0.5 * (nu * PI).ln()
        };
        Ok(Self { nu, ln_norm })
    }

    pub fn gaussian() -> Self {
        Self { nu: f64::INFINITY, ln_norm: -0.5 * (2.0 * PI).ln() }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn is_gaussian(&self) -> bool {
        self.nu.is_infinite()
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        if self.is_gaussian() {
            return self.ln_norm - 0.5 * t * t;
        }
        let r = t * t / self.nu;
        let l1p = if r > 1e300 { 2.0 * t.abs().ln() - self.nu.ln() } else { r.ln_1p() };
        self.ln_norm - 0.5 * (self.nu + 1.0) * l1p
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if self.is_gaussian() {
            return normal_pdf(t);
        }
        self.ln_pdf(t).exp()
    }

    /// (P(T > |t|), P(T ≤ |t|)) in the log domain.
    fn ln_tail_center(&self, t: f64) -> (f64, f64) {
        let nu = self.nu;
        let a = t.abs();
        let (x, y, ln_x, ln_y);
        if a * a <= nu {
            let r = a * a / nu;
            let l = r.ln_1p();
            x = 1.0 / (1.0 + r);
            y = r / (1.0 + r);
            ln_x = -l;
            ln_y = if r > 0.0 { r.ln() - l } else { f64::NEG_INFINITY };
        } else {
            let s = (nu / a) / a;
            let l = s.ln_1p();
            x = s / (1.0 + s);
            y = 1.0 / (1.0 + s);
            ln_x = s.ln() - l;
            ln_y = -l;
        }
        let tails = beta_tails(0.5 * nu, 0.5, x, y, ln_x, ln_y);
        (LN_HALF + tails.ln_lower, LN_HALF + tails.upper.ln_1p())
    }

    pub(crate) fn ln_cdf(&self, t: f64) -> f64 {
        if self.is_gaussian() {
            return ln_ncdf(t);
        }
        let (tail, center) = self.ln_tail_center(t);
        if t >= 0.0 {
            center
        } else {
            tail
        }
    }

    pub(crate) fn ln_sf(&self, t: f64) -> f64 {
        self.ln_cdf(-t)
    }

    pub fn cdf(&self, t: f64) -> DistributionEval {
        if self.is_gaussian() {
            return normal_cdf(t);
        }
        DistributionEval::from_log(self.ln_cdf(t))
    }

    pub fn sf(&self, t: f64) -> DistributionEval {
        self.cdf(-t)
    }

    /// γ_ν^ν, the constant in P(T > t) ~ γ_ν^ν t^(−ν).
    pub(crate) fn ln_tail_constant(&self) -> f64 {
        self.ln_norm + 0.5 * (self.nu - 1.0) * self.nu.ln()
    }

    /// The t with P(T > t) = q.
    pub fn quantile_upper(&self, q: f64) -> f64 {
        if !(q > 0.0 && q < 1.0) {
            return if q <= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if q > 0.5 {
            return -self.quantile_upper(1.0 - q);
        }
        if q == 0.5 {
            return 0.0;
        }
        let nu = self.nu;
        if self.is_gaussian() {
            return qnorm_upper(q);
        }
        if nu == 1.0 {
            return 1.0 / (PI * q).tan();
        }
        if nu == 2.0 {
            return (1.0 - 2.0 * q) / (2.0 * q * (1.0 - q)).sqrt();
        }
        let target = q.ln();
        let z = qnorm_upper(q);
        let cf = z * (1.0 + (z * z + 1.0) / (4.0 * nu));
        let tail = ((self.ln_tail_constant() - target) / nu).exp();
        let mut lo = 0.0;
        let mut hi = cf.max(1.0);
        while self.ln_sf(hi) > target {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let mut t = if tail > lo && tail < hi && q < 1e-3 { tail } else { cf.clamp(lo, hi) };
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let f = self.ln_sf(t) - target;
            if f == 0.0 {
                return t;
            }
            if f > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let dlog = (self.ln_pdf(t) - self.ln_sf(t)).exp();
            let mut next = t + f / dlog;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if lo > 0.0 && hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
            }
            if (next - t).abs() <= 1e-15 * t.abs() || hi - lo <= 1e-15 * hi {
                return next;
            }
            t = next;
        }
        t
    }

    pub fn quantile(&self, p: f64) -> f64 {
        if self.is_gaussian() && p > 0.0 && p < 1.0 {
            return qnorm(p);
        }
        self.quantile_upper(1.0 - p)
    }
}

pub fn student_t_pdf(t: f64, nu: f64) -> Result<f64> {
    Ok(StudentT::new(nu)?.pdf(t))
}

pub fn student_t_cdf(t: f64, nu: f64) -> Result<DistributionEval> {
    Ok(StudentT::new(nu)?.cdf(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_center() {
        for &nu in &[0.7, 1.0, 3.0, 12.5, 1e6] {
            assert_eq!(student_t_cdf(0.0, nu).unwrap().value, 0.5);
        }
    }

    #[test]
    fn cauchy_and_two_dof_closed_forms() {
        assert!((student_t_cdf(1.0, 1.0).unwrap().value - 0.75).abs() < 1e-14);
        for &t in &[-30.0f64, -2.0, 0.3, 4.0, 1e3] {
            let cauchy = 0.5 + t.atan() / PI;
            let got = student_t_cdf(t, 1.0).unwrap();
            assert!((got.value - cauchy).abs() <= 1e-13 * cauchy.max(1e-3));
            let two = 0.5 + t / (2.0 * (t * t + 2.0).sqrt());
            let got2 = student_t_cdf(t, 2.0).unwrap().value;
            assert!((got2 - two).abs() <= 1e-12 * two);
        }
    }

    #[test]
    fn huge_dof_approaches_gaussian() {
        let g = normal_cdf(1.3).value;
        assert!((student_t_cdf(1.3, 1e8).unwrap().value - g).abs() < 1e-6);
        let inf = StudentT::new(f64::INFINITY).unwrap();
        assert_eq!(inf.cdf(1.3).value, g);
    }

    #[test]
    fn log_tail_far_out() {
        // P(T > t) for nu = 3 at t = 1e6 behaves like γ^3 t^-3
        let d = StudentT::new(3.0).unwrap();
        let t = 1e6f64;
        let approx = d.ln_tail_constant() - 3.0 * t.ln();
        assert!((d.ln_sf(t) - approx).abs() < 1e-6);
    }

    #[test]
    fn quantile_round_trip() {
        for &nu in &[1.0, 2.0, 2.5, 5.0, 30.0, 1e5] {
            let d = StudentT::new(nu).unwrap();
            for &q in &[0.4, 0.1, 1e-3, 1e-9, 1e-15] {
                let t = d.quantile_upper(q);
                let back = d.ln_sf(t);
                assert!((back - q.ln()).abs() < 1e-10 * q.ln().abs(), "nu = {nu} q = {q}");
            }
            assert!((d.quantile(0.9) + d.quantile(0.1)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_dof() {
        assert!(student_t_cdf(0.0, 0.0).is_err());
        assert!(student_t_pdf(0.0, -1.0).is_err());
    }
}
