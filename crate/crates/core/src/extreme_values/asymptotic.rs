//! Asymptotic expansions in k for resolving limits of sequence descriptors.
//!
//! A term is c · k^e0 · (ln k)^e1 · (ln ln k)^e2 · (ln ln ln k)^e3. An
//! expansion is a finite sum of terms plus an optional remainder order: the
//! true sequence differs from the sum by O(remainder) as k → ∞.

use std::cmp::Ordering;

use crate::error::{Error, Result};

const SCALES: usize = 4;
const SERIES_TERMS: usize = 6;
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Order(pub [f64; SCALES]);

impl Order {
    pub const ZERO: Order = Order([0.0; SCALES]);

    fn add(self, other: Order) -> Order {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Order(e)
    }

    fn scale(self, p: f64) -> Order {
        Order(self.0.map(|x| x * p))
    }

    fn cmp(&self, other: &Order) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if (a - b).abs() > EPS {
                return a.partial_cmp(b).unwrap_or(Ordering::Equal);
            }
        }
        Ordering::Equal
    }

    fn is_zero(&self) -> bool {
        self.cmp(&Order::ZERO) == Ordering::Equal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term {
    pub coef: f64,
    pub order: Order,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Expansion {
    terms: Vec<Term>,
    remainder: Option<Order>,
}

/// Limit of a sequence as k → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Limit {
    Finite(f64),
    PosInf,
    NegInf,
}

fn max_order(a: Option<Order>, b: Option<Order>) -> Option<Order> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.cmp(&y) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Expansion {
    pub fn constant(c: f64) -> Self {
        Self::monomial(c, Order::ZERO)
    }

    pub fn monomial(coef: f64, order: Order) -> Self {
        Expansion { terms: vec![Term { coef, order }], remainder: None }.normalized()
    }

    /// c · k^beta
    pub fn pow_k(coef: f64, beta: f64) -> Self {
        Self::monomial(coef, Order([beta, 0.0, 0.0, 0.0]))
    }

    /// c · ln k
    pub fn ln_k(coef: f64) -> Self {
        Self::monomial(coef, Order([0.0, 1.0, 0.0, 0.0]))
    }

    fn normalized(mut self) -> Self {
        self.terms.sort_by(|a, b| b.order.cmp(&a.order));
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        let mut scale: Vec<f64> = Vec::new();
        for t in self.terms {
            match out.last_mut() {
                Some(last) if last.order.cmp(&t.order) == Ordering::Equal => {
                    last.coef += t.coef;
                    *scale.last_mut().unwrap() += t.coef.abs();
                }
                _ => {
                    out.push(t);
                    scale.push(t.coef.abs());
                }
            }
        }
        let rem = self.remainder;
        self.terms = out
            .into_iter()
            .zip(scale)
            .filter(|(t, s)| t.coef.abs() > EPS * s)
            .map(|(t, _)| t)
            .filter(|t| match rem {
                Some(r) => t.order.cmp(&r) == Ordering::Greater,
                None => true,
            })
            .collect();
        self
    }

    fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Expansion::constant(0.0);
        }
        Expansion {
            terms: self.terms.iter().map(|t| Term { coef: t.coef * c, order: t.order }).collect(),
            remainder: self.remainder,
        }
    }

    pub fn add(&self, other: &Expansion) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Expansion { terms, remainder: max_order(self.remainder, other.remainder) }.normalized()
    }

    pub fn sub(&self, other: &Expansion) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expansion) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term { coef: a.coef * b.coef, order: a.order.add(b.order) });
            }
        }
        let mut rem = None;
        if let (Some(r), Some(l)) = (other.remainder, self.leading()) {
            rem = max_order(rem, Some(l.order.add(r)));
        }
        if let (Some(r), Some(l)) = (self.remainder, other.leading()) {
            rem = max_order(rem, Some(l.order.add(r)));
        }
        if let (Some(r1), Some(r2)) = (self.remainder, other.remainder) {
            rem = max_order(rem, Some(r1.add(r2)));
        }
        Expansion { terms, remainder: rem }.normalized()
    }

    /// Split as lead · (1 + x) with x → 0.
    fn factor(&self, what: &str) -> Result<(Term, Expansion)> {
        let lead = self
            .leading()
            .ok_or_else(|| Error::Unsupported(format!("{what} of a sequence with no resolvable leading term")))?;
        if let Some(r) = self.remainder {
            if r.cmp(&lead.order) != Ordering::Less {
                return Err(Error::Unsupported(format!("{what}: leading term not resolved")));
            }
        }
        let inv = Term { coef: 1.0 / lead.coef, order: lead.order.scale(-1.0) };
        let rest = Expansion { terms: self.terms[1..].to_vec(), remainder: self.remainder };
        let x = rest.mul(&Expansion { terms: vec![inv], remainder: None });
        Ok((lead, x))
    }

    /// Sum of `coefs[n] · x^n` for n ≥ 1, with the truncation remainder.
    fn series(x: &Expansion, coefs: &[f64]) -> Expansion {
        let mut acc = Expansion::constant(0.0);
        let mut power = Expansion::constant(1.0);
        for &c in coefs.iter().skip(1) {
            power = power.mul(x);
            acc = acc.add(&power.scale(c));
        }
        if let Some(l) = x.leading() {
            let tail = l.order.scale(coefs.len() as f64);
            acc.remainder = max_order(acc.remainder, Some(tail));
            if let Some(r) = x.remainder {
                acc.remainder = max_order(acc.remainder, Some(r));
            }
        } else if let Some(r) = x.remainder {
            acc.remainder = max_order(acc.remainder, Some(r));
        }
        acc.normalized()
    }

    /// self^p; requires a positive leading coefficient.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let (lead, x) = self.factor("power")?;
        if lead.coef <= 0.0 {
            return Err(Error::Unsupported("fractional power of a negative sequence".into()));
        }
        let mut coefs = vec![1.0; SERIES_TERMS + 1];
        for n in 1..=SERIES_TERMS {
            coefs[n] = coefs[n - 1] * (p - (n as f64 - 1.0)) / n as f64;
        }
        let base = Expansion::monomial(lead.coef.powf(p), lead.order.scale(p));
        let s = Expansion::constant(1.0).add(&Self::series(&x, &coefs));
        Ok(base.mul(&s))
    }

    /// Natural logarithm; requires a positive leading coefficient.
    pub fn ln(&self) -> Result<Self> {
        let (lead, x) = self.factor("logarithm")?;
        if lead.coef <= 0.0 {
            return Err(Error::Unsupported("logarithm of a negative sequence".into()));
        }
        let e = lead.order.0;
        if e[SCALES - 1].abs() > EPS {
            return Err(Error::Unsupported("iterated logarithm beyond ln ln ln k".into()));
        }
        let mut out = Expansion::constant(lead.coef.ln());
        for j in 0..SCALES - 1 {
            if e[j].abs() > EPS {
                let mut o = [0.0; SCALES];
                o[j + 1] = 1.0;
                out = out.add(&Expansion::monomial(e[j], Order(o)));
            }
        }
        let coefs: Vec<f64> = (0..=SERIES_TERMS)
            .map(|n| {
                if n == 0 {
                    0.0
                } else if n % 2 == 1 {
                    1.0 / n as f64
                } else {
                    -1.0 / n as f64
                }
            })
            .collect();
        Ok(out.add(&Self::series(&x, &coefs)))
    }

    /// Limit as k → ∞, if the expansion determines it.
    pub fn limit(&self) -> Result<Limit> {
        let lead = self.terms.iter().find(|t| t.order.cmp(&Order::ZERO) != Ordering::Less);
        if let Some(r) = self.remainder {
            let bound = match lead {
                Some(t) if !t.order.is_zero() => t.order,
                _ => Order::ZERO,
            };
            if r.cmp(&bound) != Ordering::Less {
                return Err(Error::Unsupported("limit not determined by the available expansion".into()));
            }
        }
        Ok(match lead {
            None => Limit::Finite(0.0),
            Some(t) if t.order.is_zero() => Limit::Finite(t.coef),
            Some(t) if t.coef > 0.0 => Limit::PosInf,
            Some(_) => Limit::NegInf,
        })
    }

    /// Numerical value at a finite k, ignoring the remainder.
    #[cfg(test)]
    pub fn eval(&self, k: f64) -> f64 {
        let l0 = k.ln();
        let l1 = l0.ln();
        let l2 = l1.ln();
        self.terms
            .iter()
            .map(|t| {
                let e = t.order.0;
                t.coef * k.powf(e[0]) * l0.powf(e[1]) * l1.powf(e[2]) * l2.powf(e[3])
            })
            .sum()
    }
}
