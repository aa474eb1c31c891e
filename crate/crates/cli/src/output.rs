//! CSV emission with locale-independent 9-significant-digit numbers.

use std::io::Write;

use crate::error::CliError;

/// `x` rounded to 9 significant digits in its shortest round-trip form.
/// Plain notation for magnitudes in [1e-5, 1e15), exponent form otherwise.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn opt_number(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const TABLE1: &[&str] = &["k", "p", "n_exact", "n_asymptotic", "rel_err"];
pub const FIG1: &[&str] = &["panel", "alpha", "k", "s", "p", "n_exact", "n_asymptotic", "rel_err"];
pub const SOLVE_N: &[&str] = &["k", "s", "p", "n_exact", "n_asymptotic", "rel_err"];
pub const H_TABLE: &[&str] =
    &["k", "nu", "p", "h1", "h1_tilde", "h1_rel_err", "h2", "h2_tilde", "h2_rel_err", "ratio_sq", "ratio_sq_limit"];
pub const FIG3: &[&str] =
    &["k", "p", "nu_exact", "nu_approx", "h1_at_exact", "h1_tilde_at_approx", "mu_exact", "mu_tilde"];
pub const EXPECTED_N: &[&str] = &["k", "nu", "p", "procedure", "mode", "h", "expected_n"];
pub const SIMULATE: &[&str] =
    &["procedure", "populations", "n0", "p", "h", "p_hat", "ci_half_width", "replications", "seed"];
pub const LIMIT_LAW: &[&str] = &["preset", "l", "l_star", "route", "mc_k", "mc_p_hat", "mc_ci_half_width"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(number(2.0 / 3.0 * 1e3), "666.666667");
        assert_eq!(number(1.0 / 3.0), "0.333333333");
        assert_eq!(number(10_000_000.0), "10000000");
        assert_eq!(number(-0.0693_f64), "-0.0693");
        assert_eq!(number(1.234_567_891_234e-9), "1.23456789e-9");
        assert_eq!(number(f64::INFINITY), "inf");
    }

    #[test]
    fn formatting_is_idempotent() {
        for x in [std::f64::consts::PI, 1e-7 / 3.0, 2e20 / 7.0, -123.456_789_123] {
            let once = number(x);
            assert_eq!(number(once.parse().unwrap()), once);
        }
    }
}
