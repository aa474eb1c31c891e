//! Executable two-stage selection over simulated Gaussian populations.
//!
//! Stage one draws N₀ observations per population and forms the unbiased
//! variance S_i². Stage two tops each population up to
//! N_i = max(N₀+1, ⌈(h/Δ)² S_i²⌉) and selects the largest weighted mean.
//! Dudewicz–Dalal weights the two stages so that S_i² Σ a² = (Δ/h)²;
//! Rinott uses the plain mean.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng::NormalStream;
use crate::stats::wilson;
use crate::two_stage::{solve_h1_with, solve_h2_with, Procedure, TwoStageProblem};
use crate::Numerics;

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSpec {
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
}

impl PopulationSpec {
    pub fn new(means: Vec<f64>, variances: Vec<f64>) -> Result<Self> {
        let spec = Self { means, variances };
        spec.validate()?;
        Ok(spec)
    }

    /// Least favourable configuration: every mean 0 except the last, at Δ.
    pub fn lfc(variances: Vec<f64>, delta: f64) -> Result<Self> {
        let mut means = vec![0.0; variances.len()];
        if let Some(last) = means.last_mut() {
            *last = delta;
        }
        Self::new(means, variances)
    }

    pub fn validate(&self) -> Result<()> {
        if self.means.len() != self.variances.len() {
            return Err(Error::InvalidSpec(format!(
                "{} means but {} variances",
                self.means.len(),
                self.variances.len()
            )));
        }
        if self.means.len() < 2 {
            return Err(Error::InvalidSpec("at least two populations are required".into()));
        }
        if self.means.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidSpec("means must be finite".into()));
        }
        if self.variances.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidSpec("variances must be positive and finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Index of the unique largest mean.
    pub fn best(&self) -> Result<usize> {
        let top = argmax(&self.means);
        match self.means.iter().enumerate().find(|&(i, &m)| i != top && m == self.means[top]) {
            Some((second, _)) => Err(Error::AmbiguousBest { first: top, second }),
            None => Ok(top),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcedureConfig {
    pub delta: f64,
    pub n0: u64,
    pub p: f64,
    /// h_k^(1) for Dudewicz–Dalal, h_k^(2) for Rinott.
    pub h: f64,
    pub variant: Procedure,
}

impl ProcedureConfig {
    /// Configuration with h solved for `populations` populations and ν = N₀ − 1.
    pub fn solved(
        populations: usize,
        n0: u64,
        p: f64,
        delta: f64,
        variant: Procedure,
        numerics: &Numerics,
    ) -> Result<Self> {
        if populations < 2 {
            return Err(Error::InvalidSpec("at least two populations are required".into()));
        }
        if n0 < 2 {
            return Err(Error::domain("ProcedureConfig", "N0 must be at least 2"));
        }
        let problem = TwoStageProblem::new(populations as u64 - 1, (n0 - 1) as f64, p, delta)?;
        let h = match variant {
            Procedure::DudewiczDalal => solve_h1_with(&problem, numerics)?,
            Procedure::Rinott => solve_h2_with(&problem, numerics)?,
        }
        .value;
        let config = Self { delta, n0, p, h, variant };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::domain("ProcedureConfig", "delta must be positive"));
        }
        if self.n0 < 2 {
            return Err(Error::domain("ProcedureConfig", "N0 must be at least 2"));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain("ProcedureConfig", "p must lie in (0, 1)"));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::domain("ProcedureConfig", "h must be positive"));
        }
        Ok(())
    }

    /// Second-stage total N_i for a first-stage variance.
    pub fn total_size(&self, s2: f64) -> u64 {
        let target = ((self.h / self.delta).powi(2) * s2).ceil();
        let target = if target >= u64::MAX as f64 { u64::MAX } else { target as u64 };
        target.max(self.n0 + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    pub chosen: usize,
    pub per_population_n: Vec<u64>,
    pub weighted_means: Vec<f64>,
    pub total_samples: u64,
    pub first_stage_variances: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcsEstimate {
    pub p_hat: f64,
    pub replications: u64,
    /// 95% Wilson half-width.
    pub ci_half_width: f64,
    pub seed: u64,
}

/// Stage-one weight u and stage-two weight v.
fn two_level_weights(n0: u64, n: u64, s2: f64, delta: f64, h: f64) -> Result<(f64, f64)> {
    if n0 < 2 || n <= n0 {
        return Err(Error::domain("compute_weights", "need N0 >= 2 and N > N0"));
    }
    if !(s2 > 0.0 && delta > 0.0 && h > 0.0) {
        return Err(Error::domain("compute_weights", "S^2, delta and h must be positive"));
    }
    let (n0f, nf) = (n0 as f64, n as f64);
    let m = nf - n0f;
    let target = (delta / h).powi(2);
    let excess = nf * target / s2 - 1.0;
    if excess < -1e-12 {
        return Err(Error::InfeasibleWeights { target, floor: s2 / nf });
    }
    let d = (m * excess.max(0.0) / n0f).sqrt();
    Ok(((1.0 - d) / nf, (1.0 + n0f * d / m) / nf))
}

/// Dudewicz–Dalal weights: N₀ copies of u followed by N − N₀ copies of v,
/// with Σa = 1 and S² Σa² = (Δ/h)². Of the two roots, the one with v ≥ 1/N.
pub fn compute_weights(n0: u64, n: u64, s2: f64, delta: f64, h: f64) -> Result<Vec<f64>> {
    let (u, v) = two_level_weights(n0, n, s2, delta, h)?;
    let mut a = vec![u; n0 as usize];
    a.resize(n as usize, v);
    Ok(a)
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

struct PopulationDraw {
    n: u64,
    mean: f64,
    s2: f64,
}

fn draw_population(
    mean: f64,
    variance: f64,
    config: &ProcedureConfig,
    seed: u64,
    rep: u64,
    pop: u64,
) -> PopulationDraw {
    let sd = variance.sqrt();
    let mut rng = NormalStream::new(seed, rep, pop);
    let first: Vec<f64> = (0..config.n0).map(|_| mean + sd * rng.next_normal()).collect();
    let n0 = config.n0 as f64;
    let sum1: f64 = first.iter().sum();
    let xbar = sum1 / n0;
    let s2 = first.iter().map(|x| (x - xbar).powi(2)).sum::<f64>() / (n0 - 1.0);
    let n = config.total_size(s2);
    let sum2: f64 = (config.n0..n).map(|_| mean + sd * rng.next_normal()).sum();
    let estimate = match config.variant {
        Procedure::Rinott => (sum1 + sum2) / n as f64,
        Procedure::DudewiczDalal => {
            // S² > 0 almost surely; a degenerate draw falls back to the plain mean
            match two_level_weights(config.n0, n, s2, config.delta, config.h) {
                Ok((u, v)) => u * sum1 + v * sum2,
                Err(_) => (sum1 + sum2) / n as f64,
            }
        }
    };
    PopulationDraw { n, mean: estimate, s2 }
}

fn run_replication(spec: &PopulationSpec, config: &ProcedureConfig, seed: u64, rep: u64) -> SelectionOutcome {
    let draws: Vec<PopulationDraw> = spec
        .means
        .iter()
        .zip(&spec.variances)
        .enumerate()
        .map(|(i, (&m, &v))| draw_population(m, v, config, seed, rep, i as u64))
        .collect();
    let weighted_means: Vec<f64> = draws.iter().map(|d| d.mean).collect();
    SelectionOutcome {
        chosen: argmax(&weighted_means),
        per_population_n: draws.iter().map(|d| d.n).collect(),
        total_samples: draws.iter().map(|d| d.n).sum(),
        first_stage_variances: draws.iter().map(|d| d.s2).collect(),
        weighted_means,
    }
}

/// One run of the procedure. Deterministic in `seed`.
pub fn run_procedure(spec: &PopulationSpec, config: &ProcedureConfig, seed: u64) -> Result<SelectionOutcome> {
    spec.validate()?;
    config.validate()?;
    Ok(run_replication(spec, config, seed, 0))
}

pub fn estimate_pcs(
    spec: &PopulationSpec,
    config: &ProcedureConfig,
    replications: u64,
    seed: u64,
) -> Result<PcsEstimate> {
    estimate_pcs_with(spec, config, replications, seed, Execution::default())
}

/// Fraction of replications selecting the population with the largest mean.
/// Replication r uses streams (seed, r, i), so the estimate does not depend
/// on the execution mode or thread count.
pub fn estimate_pcs_with(
    spec: &PopulationSpec,
    config: &ProcedureConfig,
    replications: u64,
    seed: u64,
    exec: Execution,
) -> Result<PcsEstimate> {
    spec.validate()?;
    config.validate()?;
    if replications < 100 {
        return Err(Error::domain("estimate_pcs", "at least 100 replications are required"));
    }
    let best = spec.best()?;
    let hits = exec.count_range(replications, |r| run_replication(spec, config, seed, r).chosen == best);
    let (p_hat, ci_half_width) = wilson(hits, replications);
    Ok(PcsEstimate { p_hat, replications, ci_half_width, seed })
}
