//! k-grid sweeps behind the tables and figures. Cells are computed in
//! parallel and emitted in grid order.

use rsel_core::single_stage::{AsymptoticForm, Rounding, SRule};
use rsel_core::{Error, Execution, Numerics};

use crate::commands::{h_row, nu_row, solve_n_row};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{self, number, Table};
use crate::{NuModeArg, Target, WhichArg};

const TABLE_P: [f64; 4] = [0.5, 0.9, 0.95, 0.99];
const FIG1_ALPHAS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const FIG1B_P: [f64; 5] = [0.5, 0.75, 0.9, 0.95, 0.99];
const H_P: [f64; 2] = [0.5, 0.95];
const FIG2_NU: [f64; 6] = [2.0, 3.0, 5.0, 10.0, 20.0, 30.0];
const FIG3_P: [f64; 4] = [0.5, 0.75, 0.9, 0.95];

/// 10, 100, …, up to `max_k` and at most 10^7.
fn decades(max_k: u64) -> Vec<u64> {
    (1..=7).map(|e| 10u64.pow(e)).filter(|&k| k <= max_k).collect()
}

/// round(10^(j/4)) from 10 to min(max_k, 10^7).
fn quarter_decades(max_k: u64) -> Vec<u64> {
    (4..=28).map(|j| 10f64.powf(j as f64 / 4.0).round() as u64).filter(|&k| k <= max_k).collect()
}

fn run<C: Sync>(
    cells: &[C],
    header: &'static [&'static str],
    f: impl Fn(&C) -> Result<Vec<String>, Error> + Sync + Send,
) -> Result<Table, CliError> {
    let mut table = Table::new(header);
    for row in Execution::Parallel.map_items(cells, f) {
        table.push(row?);
    }
    Ok(table)
}

fn half_sqrt_row(k: u64, p: f64, numerics: &Numerics) -> Result<Vec<String>, Error> {
    let rule = SRule::half_sqrt(Rounding::Ceil);
    let row = solve_n_row(k, rule.select(k), p, 1.0, 1.0, AsymptoticForm::Limit(rule.limit_c()), numerics)?;
    // drop the s column
    Ok(vec![row[0].clone(), row[2].clone(), row[3].clone(), row[4].clone(), row[5].clone()])
}

pub fn reproduce(target: Target, table2_nu: f64, config: &RunConfig) -> Result<Table, CliError> {
    let numerics = &config.numerics;
    match target {
        Target::Table1 => {
            let cells: Vec<(u64, f64)> =
                decades(config.max_k).into_iter().flat_map(|k| TABLE_P.map(|p| (k, p))).collect();
            run(&cells, output::TABLE1, |&(k, p)| half_sqrt_row(k, p, numerics))
        }
        Target::Fig1 => {
            let ks = quarter_decades(config.max_k);
            let mut cells: Vec<(&str, f64, u64, f64)> = Vec::new();
            for alpha in FIG1_ALPHAS {
                cells.extend(ks.iter().map(|&k| ("a", alpha, k, 0.95)));
            }
            for p in FIG1B_P {
                cells.extend(ks.iter().map(|&k| ("b", 0.5, k, p)));
            }
            run(&cells, output::FIG1, |&(panel, alpha, k, p)| {
                let rule = SRule { alpha, rounding: Rounding::Ceil };
                let row = solve_n_row(k, rule.select(k), p, 1.0, 1.0, AsymptoticForm::Limit(alpha), numerics)?;
                let mut out = vec![panel.to_string(), number(alpha)];
                out.extend(row);
                Ok(out)
            })
        }
        Target::Table2 => {
            let cells: Vec<(u64, f64)> = decades(config.max_k).into_iter().flat_map(|k| H_P.map(|p| (k, p))).collect();
            run(&cells, output::H_TABLE, |&(k, p)| h_row(k, table2_nu, p, WhichArg::Both, numerics))
        }
        Target::Fig2 => {
            let ks = quarter_decades(config.max_k);
            let mut cells = Vec::new();
            for p in H_P {
                for nu in FIG2_NU {
                    cells.extend(ks.iter().map(|&k| (k, nu, p)));
                }
            }
            run(&cells, output::H_TABLE, |&(k, nu, p)| h_row(k, nu, p, WhichArg::Both, numerics))
        }
        Target::Fig3 => {
            let ks = quarter_decades(config.max_k);
            let cells: Vec<(u64, f64)> = FIG3_P.iter().flat_map(|&p| ks.iter().map(move |&k| (k, p))).collect();
            run(&cells, output::FIG3, |&(k, p)| nu_row(k, p, NuModeArg::Both, 1.0, 1.0, numerics))
        }
    }
}
