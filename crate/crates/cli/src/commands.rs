use std::path::Path;

use rsel_core::extreme_values::{limit_combo_cdf_with, mc_partial_maxima, LimitCombinationSpec, Route};
use rsel_core::procedures::{estimate_pcs_with, PopulationSpec, ProcedureConfig};
use rsel_core::single_stage::{solve_sample_size_with, AsymptoticForm, Rounding, SRule, SingleStageProblem};
use rsel_core::two_stage::{
    expected_sample_size, h_gaussian_asymptotic, h_tilde, optimal_nu_with, ratio_sq_limit, solve_h1_with,
    solve_h2_with, solve_h_with, NuChoice, NuMode, Procedure, SampleSizeMode, TwoStageProblem,
};
use rsel_core::{Error, Execution, Numerics};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{number, opt_number, Table};
use crate::{output, sweeps, Command, LimitPreset, NuModeArg, ProcedureArg, RoundingArg, SizeModeArg, WhichArg};

pub fn execute(command: &Command, config: &RunConfig) -> Result<Table, CliError> {
    let numerics = &config.numerics;
    match command {
        Command::SolveN { k, s, s_rule, rounding, p, delta, sigma2 } => {
            let (s, form) = match (s, s_rule) {
                (_, Some(rule)) => {
                    let rule = parse_s_rule(rule, *rounding)?;
                    (rule.select(*k), AsymptoticForm::Limit(rule.limit_c()))
                }
                (Some(s), None) => (*s, AsymptoticForm::FiniteK),
                (None, None) => (1, AsymptoticForm::FiniteK),
            };
            let mut table = Table::new(output::SOLVE_N);
            table.push(solve_n_row(*k, s, *p, *delta, *sigma2, form, numerics)?);
            Ok(table)
        }
        Command::SolveH { k, nu, p, which } => {
            let mut table = Table::new(output::H_TABLE);
            table.push(h_row(*k, *nu, *p, *which, numerics)?);
            Ok(table)
        }
        Command::OptimalNu { k, p, mode, delta, sigma2 } => {
            let mut table = Table::new(output::FIG3);
            table.push(nu_row(*k, *p, *mode, *delta, *sigma2, numerics)?);
            Ok(table)
        }
        Command::ExpectedN { k, nu, p, procedure, mode, delta, sigma2, h } => {
            let problem = TwoStageProblem::new(*k, *nu, *p, *delta)?;
            let variances = broadcast(sigma2, *k as usize + 1, "--sigma2")?;
            let variant = procedure_of(*procedure);
            let h = match h {
                Some(h) => *h,
                None => solve_for(&problem, variant, numerics)?,
            };
            let size_mode = match mode {
                SizeModeArg::Exact => SampleSizeMode::ChiSquareExact,
                SizeModeArg::PlugIn => SampleSizeMode::PlugIn,
            };
            let total = expected_sample_size(&problem, h, &variances, size_mode)?;
            let mut table = Table::new(output::EXPECTED_N);
            table.push(vec![
                k.to_string(),
                number(*nu),
                number(*p),
                procedure_name(variant).into(),
                match mode {
                    SizeModeArg::Exact => "exact".into(),
                    SizeModeArg::PlugIn => "plug-in".into(),
                },
                number(h),
                number(total),
            ]);
            Ok(table)
        }
        Command::Simulate { spec, lfc, variances, procedure, n0, p, delta, h } => {
            let populations = match (spec, lfc) {
                (Some(path), _) => read_population_spec(path)?,
                (None, Some(n)) => PopulationSpec::lfc(broadcast(variances, *n, "--variances")?, *delta)?,
                (None, None) => return Err(CliError::Usage("simulate needs --spec FILE or --lfc N".into())),
            };
            let variant = procedure_of(*procedure);
            let cfg = match h {
                Some(h) => {
                    let cfg = ProcedureConfig { delta: *delta, n0: *n0, p: *p, h: *h, variant };
                    cfg.validate()?;
                    cfg
                }
                None => ProcedureConfig::solved(populations.len(), *n0, *p, *delta, variant, numerics)?,
            };
            let est = estimate_pcs_with(&populations, &cfg, config.replications, config.seed, Execution::Parallel)?;
            let mut table = Table::new(output::SIMULATE);
            table.push(vec![
                procedure_name(variant).into(),
                populations.len().to_string(),
                n0.to_string(),
                number(*p),
                number(cfg.h),
                number(est.p_hat),
                number(est.ci_half_width),
                est.replications.to_string(),
                est.seed.to_string(),
            ]);
            Ok(table)
        }
        Command::LimitLaw { preset, x, nu, p, xi, mc_k } => {
            let (name, spec) = match preset {
                LimitPreset::Gumbel => ("gumbel", LimitCombinationSpec::gaussian_normalised(*x)),
                LimitPreset::Student => ("student", LimitCombinationSpec::student_quantile(*nu, *p)?),
                LimitPreset::FinitePlusInfinite => {
                    ("finite-plus-infinite", LimitCombinationSpec::single_plus_maximum(*xi))
                }
                LimitPreset::SymmetricDifference => ("symmetric-difference", LimitCombinationSpec::half_difference()),
            };
            let law = limit_combo_cdf_with(&spec, &numerics.quad)?;
            let mc = match mc_k {
                Some(k) => Some(mc_partial_maxima(&spec, *k, config.replications, config.seed)?),
                None => None,
            };
            let route = match law.route {
                Route::Direct => "direct".to_string(),
                Route::Rescaled { pivot } => format!("rescaled:{pivot}"),
            };
            let mut table = Table::new(output::LIMIT_LAW);
            table.push(vec![
                name.into(),
                number(law.l),
                number(law.l_star),
                route,
                mc_k.map(|k| k.to_string()).unwrap_or_default(),
                opt_number(mc.map(|m| m.p_hat)),
                opt_number(mc.map(|m| m.ci_half_width)),
            ]);
            Ok(table)
        }
        Command::Reproduce { target, nu } => sweeps::reproduce(*target, *nu, config),
    }
}

fn parse_s_rule(rule: &str, rounding: RoundingArg) -> Result<SRule, CliError> {
    let rounding = match rounding {
        RoundingArg::Ceil => Rounding::Ceil,
        RoundingArg::Nearest => Rounding::Nearest,
    };
    if rule == "half-sqrt" {
        return Ok(SRule::half_sqrt(rounding));
    }
    let alpha = rule
        .strip_prefix("half-pow:")
        .and_then(|a| a.parse::<f64>().ok())
        .filter(|a| (0.0..1.0).contains(a))
        .ok_or_else(|| {
        CliError::Usage(format!("unknown s rule {rule:?}; use half-sqrt or half-pow:A with 0 <= A < 1"))
    })?;
    Ok(SRule { alpha, rounding })
}

fn broadcast(values: &[f64], n: usize, flag: &str) -> Result<Vec<f64>, CliError> {
    match values.len() {
        1 => Ok(vec![values[0]; n]),
        m if m == n => Ok(values.to_vec()),
        m => Err(CliError::Usage(format!("{flag} takes 1 or {n} values, got {m}"))),
    }
}

fn procedure_of(arg: ProcedureArg) -> Procedure {
    match arg {
        ProcedureArg::Dd => Procedure::DudewiczDalal,
        ProcedureArg::Rinott => Procedure::Rinott,
    }
}

fn procedure_name(p: Procedure) -> &'static str {
    match p {
        Procedure::DudewiczDalal => "dd",
        Procedure::Rinott => "rinott",
    }
}

fn solve_for(problem: &TwoStageProblem, which: Procedure, numerics: &Numerics) -> Result<f64, Error> {
    Ok(match which {
        Procedure::DudewiczDalal => solve_h1_with(problem, numerics)?,
        Procedure::Rinott => solve_h2_with(problem, numerics)?,
    }
    .value)
}

fn read_population_spec(path: &Path) -> Result<PopulationSpec, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing column {name:?}", path.display())))
    };
    let (mi, vi) = (col("mean")?, col("variance")?);
    let (mut means, mut variances) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record?;
        let cell = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| CliError::Usage(format!("{}: bad number in row {:?}", path.display(), record)))
        };
        means.push(cell(mi)?);
        variances.push(cell(vi)?);
    }
    Ok(PopulationSpec::new(means, variances)?)
}

pub(crate) fn solve_n_row(
    k: u64,
    s: u64,
    p: f64,
    delta: f64,
    sigma2: f64,
    form: AsymptoticForm,
    numerics: &Numerics,
) -> Result<Vec<String>, Error> {
    let problem = SingleStageProblem::new(k, s, delta, sigma2, p)?;
    let r = solve_sample_size_with(&problem, form, numerics)?;
    Ok(vec![
        k.to_string(),
        s.to_string(),
        number(p),
        number(r.n_exact),
        number(r.n_asymptotic),
        number(r.relative_error),
    ])
}

fn tilde(problem: &TwoStageProblem, which: Procedure) -> Result<f64, Error> {
    if problem.nu.is_finite() {
        h_tilde(problem, which)
    } else if problem.k >= 2 {
        h_gaussian_asymptotic(problem.k, which)
    } else {
        Ok(f64::NAN)
    }
}

fn rel_err(approx: f64, exact: f64) -> f64 {
    (approx - exact) / exact
}

/// One row of the h table; columns of an unrequested procedure stay empty.
pub(crate) fn h_row(k: u64, nu: f64, p: f64, which: WhichArg, numerics: &Numerics) -> Result<Vec<String>, Error> {
    let problem = TwoStageProblem::new(k, nu, p, 1.0)?;
    let (h1, h2) = match which {
        WhichArg::Both => {
            let c = solve_h_with(&problem, numerics)?;
            (Some(c.h1), Some(c.h2))
        }
        WhichArg::Dd => (Some(solve_for(&problem, Procedure::DudewiczDalal, numerics)?), None),
        WhichArg::Rinott => (None, Some(solve_for(&problem, Procedure::Rinott, numerics)?)),
    };
    let t1 = h1.map(|_| tilde(&problem, Procedure::DudewiczDalal)).transpose()?;
    let t2 = h2.map(|_| tilde(&problem, Procedure::Rinott)).transpose()?;
    let ratio = match (h1, h2) {
        (Some(a), Some(b)) if a != 0.0 => Some((b / a).powi(2)),
        (Some(_), Some(_)) => Some(f64::NAN),
        _ => None,
    };
    Ok(vec![
        k.to_string(),
        number(nu),
        number(p),
        opt_number(h1),
        opt_number(t1),
        opt_number(h1.zip(t1).map(|(h, t)| rel_err(t, h))),
        opt_number(h2),
        opt_number(t2),
        opt_number(h2.zip(t2).map(|(h, t)| rel_err(t, h))),
        opt_number(ratio),
        number(ratio_sq_limit(nu)),
    ])
}

/// Σ max(ν + 2, h²σ²/Δ²) over k + 1 populations of common variance.
fn deterministic_total(k: u64, nu: f64, h: f64, sigma2: f64, delta: f64) -> f64 {
    (k + 1) as f64 * (nu + 2.0).max(h * h * sigma2 / (delta * delta))
}

fn choice(k: u64, p: f64, mode: NuMode, delta: f64, sigma2: f64, numerics: &Numerics) -> Result<NuChoice, Error> {
    // only Σσ² enters μ̃, so the k + 1 equal variances are passed as their sum
    optimal_nu_with(k, p, mode, &[(k + 1) as f64 * sigma2], delta, numerics)
}

/// One fig3 row. In `Both` mode a k too small for one of the choices leaves
/// its columns empty.
pub(crate) fn nu_row(
    k: u64,
    p: f64,
    mode: NuModeArg,
    delta: f64,
    sigma2: f64,
    numerics: &Numerics,
) -> Result<Vec<String>, Error> {
    let tolerate = |r: Result<NuChoice, Error>| match r {
        Err(Error::KTooSmall { .. }) if mode == NuModeArg::Both => Ok(None),
        other => other.map(Some),
    };
    let exact = match mode {
        NuModeArg::Approx => None,
        _ => tolerate(choice(k, p, NuMode::Exact, delta, sigma2, numerics))?,
    };
    let approx = match mode {
        NuModeArg::Exact => None,
        _ => tolerate(choice(k, p, NuMode::Approx, delta, sigma2, numerics))?,
    };
    let nu_exact = exact.and_then(|c| c.nu_exact);
    Ok(vec![
        k.to_string(),
        number(p),
        opt_number(nu_exact),
        opt_number(approx.and_then(|c| c.nu_approx)),
        opt_number(exact.map(|c| c.h_at_choice)),
        opt_number(approx.map(|c| c.h_at_choice)),
        opt_number(exact.zip(nu_exact).map(|(c, nu)| deterministic_total(k, nu, c.h_at_choice, sigma2, delta))),
        opt_number(approx.map(|c| c.mu_tilde)),
    ])
}
