use std::f64::consts::PI;

use super::asymptotic::{Expansion, Limit};
use super::{gamma_nu, gaussian_a, gaussian_b};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use crate::special::normal::{ln_ncdf, qnorm_upper};
use crate::special::StudentT;

const MAX_COMPONENTS: usize = 4;

/// Distribution of the underlying i.i.d. variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseFamily {
    Gaussian,
    Student(f64),
}

/// Group size δ_k as a function of k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// round(c k), 0 < c < 1
    Linear(f64),
    /// round(c k^β), 0 < β < 1
    Power { coef: f64, exponent: f64 },
    /// round(c ln k)
    Log(f64),
    /// k minus all other groups
    Remainder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupKind {
    Finite(u64),
    Infinite(Growth),
}

/// One summand of the threshold sequence ξ_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeqTerm {
    Const(f64),
    /// c ln k
    LnK(f64),
    /// c k^β
    PowK {
        coef: f64,
        exponent: f64,
    },
    /// c · b_{δ_k} of the given group
    NormB {
        group: usize,
        coef: f64,
    },
    /// c / a_{δ_k} of the given group
    InvNormA {
        group: usize,
        coef: f64,
    },
}

/// P(Σ_t α_t M_k^(t) ≤ ξ_k), where M_k^(t) is the maximum over group t of a
/// partition of k i.i.d. variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCombinationSpec {
    pub groups: Vec<GroupKind>,
    pub alpha: Vec<f64>,
    pub xi: Vec<SeqTerm>,
    pub base: BaseFamily,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComponentLaw {
    Gumbel,
    Frechet(f64),
    /// Maximum of `count` standard Gaussians.
    GaussianMax(u64),
    /// Maximum of `count` t_ν variables.
    StudentMax {
        nu: f64,
        count: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VComponent {
    pub weight: f64,
    pub law: ComponentLaw,
}

/// How the limit was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Unnormalised threshold; finite groups contribute their exact maxima.
    Direct,
    /// Threshold rescaled by a_{δ_k} of the pivot group.
    Rescaled { pivot: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawResult {
    pub l: f64,
    /// Limit of the (possibly rescaled) threshold; may be ±∞.
    pub l_star: f64,
    pub components: Vec<VComponent>,
    pub route: Route,
}

impl LimitCombinationSpec {
    /// All k Gaussians in one group, threshold b_k + x/a_k. The limit is Λ(x).
    pub fn gaussian_normalised(x: f64) -> Self {
        Self {
            groups: vec![GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0],
            xi: vec![SeqTerm::NormB { group: 0, coef: 1.0 }, SeqTerm::InvNormA { group: 0, coef: x }],
            base: BaseFamily::Gaussian,
        }
    }

    /// All k t_ν variables in one group, threshold γ_ν k^(1/ν) q_p with q_p
    /// the Fréchet p-quantile. The limit is p.
    pub fn student_quantile(nu: f64, p: f64) -> Result<Self> {
        let q = crate::special::frechet_quantile(p, nu)?;
        Ok(Self {
            groups: vec![GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0],
            xi: vec![SeqTerm::PowK { coef: gamma_nu(nu)? * q, exponent: 1.0 / nu }],
            base: BaseFamily::Student(nu),
        })
    }

    /// One Gaussian plus the maximum of the other k − 1, constant threshold.
    /// The limit is 0.
    pub fn single_plus_maximum(xi: f64) -> Self {
        Self {
            groups: vec![GroupKind::Finite(1), GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0, 1.0],
            xi: vec![SeqTerm::Const(xi)],
            base: BaseFamily::Gaussian,
        }
    }

    /// Maximum of the first half of k Gaussians minus that of the second,
    /// threshold 0. The limit is ½.
    pub fn half_difference() -> Self {
        Self {
            groups: vec![GroupKind::Infinite(Growth::Linear(0.5)), GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0, -1.0],
            xi: vec![SeqTerm::Const(0.0)],
            base: BaseFamily::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.groups.is_empty() {
            return bad("at least one group is required".into());
        }
        if self.alpha.len() != self.groups.len() {
            return bad(format!("{} weights for {} groups", self.alpha.len(), self.groups.len()));
        }
        if self.alpha.iter().any(|a| !a.is_finite()) {
            return bad("weights must be finite".into());
        }
        if let BaseFamily::Student(nu) = self.base {
            if !(nu > 0.0 && nu.is_finite()) {
                return bad(format!("degrees of freedom must be positive and finite, got {nu}"));
            }
        }
        let mut remainders = 0;
        let mut linear = 0.0;
        for g in &self.groups {
            match *g {
                GroupKind::Finite(0) => return bad("finite groups need at least one member".into()),
                GroupKind::Finite(_) => {}
                GroupKind::Infinite(Growth::Linear(c)) => {
                    if !(c > 0.0 && c < 1.0) {
                        return bad(format!("linear growth coefficient must lie in (0, 1), got {c}"));
                    }
                    linear += c;
                }
                GroupKind::Infinite(Growth::Power { coef, exponent }) => {
                    if !(coef > 0.0 && coef.is_finite() && exponent > 0.0 && exponent < 1.0) {
                        return bad(format!(
                            "power growth needs coef > 0 and exponent in (0, 1), got {coef}, {exponent}"
                        ));
                    }
                }
                GroupKind::Infinite(Growth::Log(c)) => {
                    if !(c > 0.0 && c.is_finite()) {
                        return bad(format!("log growth coefficient must be positive, got {c}"));
                    }
                }
                GroupKind::Infinite(Growth::Remainder) => remainders += 1,
            }
        }
        if remainders != 1 {
            return bad("exactly one group must take the remainder of the partition".into());
        }
        if linear >= 1.0 {
            return bad("linear group fractions must sum to less than one".into());
        }
        for term in &self.xi {
            let (ok, group) = match *term {
                SeqTerm::Const(c) | SeqTerm::LnK(c) => (c.is_finite(), None),
                SeqTerm::PowK { coef, exponent } => (coef.is_finite() && exponent.is_finite(), None),
                SeqTerm::NormB { group, coef } | SeqTerm::InvNormA { group, coef } => (coef.is_finite(), Some(group)),
            };
            if !ok {
                return bad("threshold coefficients must be finite".into());
            }
            if let Some(g) = group {
                if g >= self.groups.len() {
                    return bad(format!("threshold refers to group {g}, but there are {}", self.groups.len()));
                }
            }
        }
        Ok(())
    }

    /// Group sizes at a finite k.
    pub fn group_sizes(&self, k: u64) -> Result<Vec<u64>> {
        self.validate()?;
        let kf = k as f64;
        let mut sizes = vec![0u64; self.groups.len()];
        let mut used: u64 = 0;
        let mut rem_idx = 0;
        for (i, g) in self.groups.iter().enumerate() {
            let d = match *g {
                GroupKind::Finite(d) => d,
                GroupKind::Infinite(Growth::Linear(c)) => (c * kf).round() as u64,
                GroupKind::Infinite(Growth::Power { coef, exponent }) => (coef * kf.powf(exponent)).round() as u64,
                GroupKind::Infinite(Growth::Log(c)) => (c * kf.ln()).round() as u64,
                GroupKind::Infinite(Growth::Remainder) => {
                    rem_idx = i;
                    continue;
                }
            };
            if d == 0 {
                return Err(Error::InvalidSpec(format!("group {i} is empty at k = {k}")));
            }
            sizes[i] = d;
            used += d;
        }
        if used >= k {
            return Err(Error::InvalidSpec(format!("no room for the remainder group at k = {k}")));
        }
        sizes[rem_idx] = k - used;
        Ok(sizes)
    }

    fn a_at(&self, n: u64) -> Result<f64> {
        match self.base {
            BaseFamily::Gaussian if n < 2 => {
                Err(Error::InvalidSpec("Gaussian normalising constants need a group of size ≥ 2".into()))
            }
            BaseFamily::Gaussian => Ok(gaussian_a(n as f64)),
            BaseFamily::Student(nu) => Ok((n as f64).powf(-1.0 / nu) / gamma_nu(nu)?),
        }
    }

    fn b_at(&self, n: u64) -> Result<f64> {
        match self.base {
            BaseFamily::Gaussian if n < 2 => {
                Err(Error::InvalidSpec("Gaussian normalising constants need a group of size ≥ 2".into()))
            }
            BaseFamily::Gaussian => Ok(gaussian_b(n as f64)),
            BaseFamily::Student(_) => Ok(0.0),
        }
    }

    /// ξ_k at a finite k.
    pub fn xi_at(&self, k: u64) -> Result<f64> {
        let sizes = self.group_sizes(k)?;
        let kf = k as f64;
        let mut x = 0.0;
        for term in &self.xi {
            x += match *term {
                SeqTerm::Const(c) => c,
                SeqTerm::LnK(c) => c * kf.ln(),
                SeqTerm::PowK { coef, exponent } => coef * kf.powf(exponent),
                SeqTerm::NormB { group, coef } => coef * self.b_at(sizes[group])?,
                SeqTerm::InvNormA { group, coef } => coef / self.a_at(sizes[group])?,
            };
        }
        Ok(x)
    }

    fn delta_expansion(&self, t: usize) -> Expansion {
        match self.groups[t] {
            GroupKind::Finite(d) => Expansion::constant(d as f64),
            GroupKind::Infinite(Growth::Linear(c)) => Expansion::pow_k(c, 1.0),
            GroupKind::Infinite(Growth::Power { coef, exponent }) => Expansion::pow_k(coef, exponent),
            GroupKind::Infinite(Growth::Log(c)) => Expansion::ln_k(c),
            GroupKind::Infinite(Growth::Remainder) => {
                let mut e = Expansion::pow_k(1.0, 1.0);
                for u in 0..self.groups.len() {
                    if u != t {
                        e = e.sub(&self.delta_expansion(u));
                    }
                }
                e
            }
        }
    }

    fn a_expansion(&self, t: usize) -> Result<Expansion> {
        if let GroupKind::Finite(d) = self.groups[t] {
            return Ok(Expansion::constant(self.a_at(d)?));
        }
        let delta = self.delta_expansion(t);
        match self.base {
            BaseFamily::Gaussian => delta.ln()?.scale(2.0).powf(0.5),
            BaseFamily::Student(nu) => Ok(delta.powf(-1.0 / nu)?.scale(1.0 / gamma_nu(nu)?)),
        }
    }

    fn b_expansion(&self, t: usize) -> Result<Expansion> {
        if let GroupKind::Finite(d) = self.groups[t] {
            return Ok(Expansion::constant(self.b_at(d)?));
        }
        match self.base {
            BaseFamily::Gaussian => {
                let ln_delta = self.delta_expansion(t).ln()?;
                let a = ln_delta.scale(2.0).powf(0.5)?;
                let shift = ln_delta.ln()?.add(&Expansion::constant((4.0 * PI).ln()));
                Ok(a.sub(&shift.mul(&a.powf(-1.0)?).scale(0.5)))
            }
            BaseFamily::Student(_) => Ok(Expansion::constant(0.0)),
        }
    }

    fn xi_expansion(&self) -> Result<Expansion> {
        let mut e = Expansion::constant(0.0);
        for term in &self.xi {
            let part = match *term {
                SeqTerm::Const(c) => Expansion::constant(c),
                SeqTerm::LnK(c) => Expansion::ln_k(c),
                SeqTerm::PowK { coef, exponent } => Expansion::pow_k(coef, exponent),
                SeqTerm::NormB { group, coef } => self.b_expansion(group)?.scale(coef),
                SeqTerm::InvNormA { group, coef } => self.a_expansion(group)?.powf(-1.0)?.scale(coef),
            };
            e = e.add(&part);
        }
        Ok(e)
    }

    fn is_infinite(&self, t: usize) -> bool {
        matches!(self.groups[t], GroupKind::Infinite(_))
    }
}

fn limit_value(l: Limit) -> f64 {
    match l {
        Limit::Finite(v) => v,
        Limit::PosInf => f64::INFINITY,
        Limit::NegInf => f64::NEG_INFINITY,
    }
}

impl ComponentLaw {
    fn cdf(&self, x: f64) -> f64 {
        match *self {
            ComponentLaw::Gumbel => (-(-x).exp()).exp(),
            ComponentLaw::Frechet(nu) => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x.powf(-nu)).exp()
                }
            }
            ComponentLaw::GaussianMax(d) => (d as f64 * ln_ncdf(x)).exp(),
            ComponentLaw::StudentMax { nu, count } => match StudentT::new(nu) {
                Ok(t) => (count as f64 * t.ln_cdf(x)).exp(),
                Err(_) => f64::NAN,
            },
        }
    }

    fn sf(&self, x: f64) -> f64 {
        match *self {
            ComponentLaw::Gumbel => -(-(-x).exp()).exp_m1(),
            ComponentLaw::Frechet(nu) => {
                if x <= 0.0 {
                    1.0
                } else {
                    -(-x.powf(-nu)).exp_m1()
                }
            }
            ComponentLaw::GaussianMax(d) => -(d as f64 * ln_ncdf(x)).exp_m1(),
            ComponentLaw::StudentMax { nu, count } => match StudentT::new(nu) {
                Ok(t) => -(count as f64 * t.ln_cdf(x)).exp_m1(),
                Err(_) => f64::NAN,
            },
        }
    }

    /// Quantile at u ∈ (0, 1).
    pub(crate) fn quantile(&self, u: f64) -> f64 {
        match *self {
            ComponentLaw::Gumbel => -(-u.ln()).ln(),
            ComponentLaw::Frechet(nu) => (-u.ln()).powf(-1.0 / nu),
            ComponentLaw::GaussianMax(d) => qnorm_upper(-(u.ln() / d as f64).exp_m1()),
            ComponentLaw::StudentMax { nu, count } => match StudentT::new(nu) {
                Ok(t) => t.quantile_upper(-(u.ln() / count as f64).exp_m1()),
                Err(_) => f64::NAN,
            },
        }
    }

    fn quantile_is_cheap(&self) -> bool {
        matches!(self, ComponentLaw::Gumbel | ComponentLaw::Frechet(_))
    }
}

/// P(Σ w_i Z_i ≤ x) by nested integration over the quantiles of all but
/// the last component.
fn weighted_sum_cdf(x: f64, comps: &[VComponent], cfg: &QuadConfig) -> Result<f64> {
    let (last, outer) = comps.split_last().expect("at least one component");
    if outer.is_empty() {
        let y = x / last.weight;
        return Ok(if last.weight > 0.0 { last.law.cdf(y) } else { last.law.sf(y) });
    }
    let (first, rest) = outer.split_first().expect("non-empty");
    let mut tail = rest.to_vec();
    tail.push(*last);
    let r = integrate(
        |u| {
            let shift = first.weight * first.law.quantile(u);
            // a failed inner integral surfaces as a non-finite integrand
            weighted_sum_cdf(x - shift, &tail, cfg).unwrap_or(f64::NAN)
        },
        0.0,
        1.0,
        cfg,
    );
    Ok(r?.value.clamp(0.0, 1.0))
}

pub fn limit_combo_cdf(spec: &LimitCombinationSpec) -> Result<LimitLawResult> {
    limit_combo_cdf_with(spec, &QuadConfig { abs_tol: 1e-9, rel_tol: 1e-9, max_subdivisions: 400 })
}

/// Limit of P(Σ α_t M_k^(t) ≤ ξ_k) as k → ∞, with F_V evaluated under `cfg`.
pub fn limit_combo_cdf_with(spec: &LimitCombinationSpec, cfg: &QuadConfig) -> Result<LimitLawResult> {
    spec.validate()?;
    let t_count = spec.groups.len();
    let xi = spec.xi_expansion()?;
    let finite_active = (0..t_count).any(|t| !spec.is_infinite(t) && spec.alpha[t] != 0.0);

    let (components, l_star, route) = if matches!(spec.base, BaseFamily::Gaussian) && finite_active {
        let mut comps = Vec::new();
        let mut shifted = xi;
        for t in 0..t_count {
            let w = spec.alpha[t];
            if w == 0.0 {
                continue;
            }
            match spec.groups[t] {
                GroupKind::Finite(d) => comps.push(VComponent { weight: w, law: ComponentLaw::GaussianMax(d) }),
                GroupKind::Infinite(_) => shifted = shifted.sub(&spec.b_expansion(t)?.scale(w)),
            }
        }
        (comps, limit_value(shifted.limit()?), Route::Direct)
    } else {
        let infinite: Vec<usize> = (0..t_count).filter(|&t| spec.is_infinite(t)).collect();
        let active: Vec<usize> = infinite.iter().copied().filter(|&t| spec.alpha[t] != 0.0).collect();
        let a: Vec<Option<Expansion>> = (0..t_count)
            .map(|t| if spec.is_infinite(t) { spec.a_expansion(t).map(Some) } else { Ok(None) })
            .collect::<Result<_>>()?;
        let ratio = |s: usize, t: usize| -> Result<Limit> {
            let (Some(num), Some(den)) = (&a[s], &a[t]) else { unreachable!("infinite groups only") };
            num.mul(&den.powf(-1.0)?).limit()
        };
        let pool = if active.is_empty() { &infinite } else { &active };
        let mut pivot = None;
        for &s in pool {
            let mut ok = true;
            for &t in pool {
                if matches!(ratio(s, t)?, Limit::PosInf | Limit::NegInf) {
                    ok = false;
                    break;
                }
            }
            if ok {
                pivot = Some(s);
                break;
            }
        }
        let pivot = pivot.ok_or_else(|| Error::Unsupported("no group has a scale dominated by all others".into()))?;
        let law = match spec.base {
            BaseFamily::Gaussian => ComponentLaw::Gumbel,
            BaseFamily::Student(nu) => ComponentLaw::Frechet(nu),
        };
        let mut comps = Vec::new();
        let mut shifted = xi;
        for &t in &infinite {
            let w = spec.alpha[t];
            if w == 0.0 {
                continue;
            }
            let lambda = match ratio(pivot, t)? {
                Limit::Finite(v) => v,
                _ => unreachable!("pivot ratios are finite"),
            };
            if lambda != 0.0 {
                comps.push(VComponent { weight: w * lambda, law });
            }
            shifted = shifted.sub(&spec.b_expansion(t)?.scale(w));
        }
        let scaled = a[pivot].as_ref().expect("pivot is infinite").mul(&shifted);
        (comps, limit_value(scaled.limit()?), Route::Rescaled { pivot })
    };

    if components.len() > MAX_COMPONENTS {
        return Err(Error::Unsupported(format!(
            "limit variable has {} components; at most {MAX_COMPONENTS} are supported",
            components.len()
        )));
    }
    let l = if l_star == f64::INFINITY {
        1.0
    } else if l_star == f64::NEG_INFINITY {
        0.0
    } else if components.is_empty() {
        if l_star >= 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        let mut ordered = components.clone();
        // cheap quantiles go to the outer integrals, the last one is read off its c.d.f.
        ordered.sort_by_key(|c| !c.law.quantile_is_cheap());
        weighted_sum_cdf(l_star, &ordered, cfg)?
    };
    Ok(LimitLawResult { l, l_star, components, route })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{frechet_quantile, gumbel_cdf};

    fn single(base: BaseFamily, xi: Vec<SeqTerm>) -> LimitCombinationSpec {
        LimitCombinationSpec { groups: vec![GroupKind::Infinite(Growth::Remainder)], alpha: vec![1.0], xi, base }
    }

    #[test]
    fn gaussian_gumbel_limit() {
        let spec = single(
            BaseFamily::Gaussian,
            vec![SeqTerm::NormB { group: 0, coef: 1.0 }, SeqTerm::InvNormA { group: 0, coef: 0.4 }],
        );
        let r = limit_combo_cdf(&spec).unwrap();
        assert!((r.l_star - 0.4).abs() < 1e-12);
        assert!((r.l - gumbel_cdf(0.4)).abs() < 1e-12);
    }

    #[test]
    fn student_frechet_limit() {
        let nu = 3.0;
        let q = frechet_quantile(0.5, nu).unwrap();
        let c = gamma_nu(nu).unwrap() * q;
        let spec = single(BaseFamily::Student(nu), vec![SeqTerm::PowK { coef: c, exponent: 1.0 / nu }]);
        let r = limit_combo_cdf(&spec).unwrap();
        assert!((r.l - 0.5).abs() < 1e-12);
    }

    #[test]
    fn finite_group_drives_threshold_to_minus_infinity() {
        let spec = LimitCombinationSpec {
            groups: vec![GroupKind::Finite(1), GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0, 1.0],
            xi: vec![SeqTerm::Const(1.0)],
            base: BaseFamily::Gaussian,
        };
        let r = limit_combo_cdf(&spec).unwrap();
        assert_eq!(r.l_star, f64::NEG_INFINITY);
        assert_eq!(r.l, 0.0);
        assert_eq!(r.route, Route::Direct);
    }

    #[test]
    fn symmetric_difference_is_half() {
        let spec = LimitCombinationSpec {
            groups: vec![GroupKind::Infinite(Growth::Linear(0.5)), GroupKind::Infinite(Growth::Remainder)],
            alpha: vec![1.0, -1.0],
            xi: vec![SeqTerm::Const(0.0)],
            base: BaseFamily::Gaussian,
        };
        let r = limit_combo_cdf(&spec).unwrap();
        assert!((r.l - 0.5).abs() < 1e-8, "{}", r.l);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = single(BaseFamily::Gaussian, vec![SeqTerm::Const(0.0)]);
        spec.alpha.push(1.0);
        assert!(limit_combo_cdf(&spec).is_err());
        let spec = LimitCombinationSpec {
            groups: vec![GroupKind::Infinite(Growth::Linear(0.5))],
            alpha: vec![1.0],
            xi: vec![],
            base: BaseFamily::Gaussian,
        };
        assert!(matches!(limit_combo_cdf(&spec), Err(Error::InvalidSpec(_))));
    }
}
