//! `rsel`: sample sizes and procedure constants for indifference-zone
//! selection, table and figure reproduction as CSV, and Monte Carlo runs.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweeps;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "rsel", version, about = "Ranking and selection sample sizes, constants and simulations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file of `key = value` lines (default: ./rsel.conf if present).
    #[arg(long, global = true, env = "RSEL_CONFIG")]
    pub config: Option<PathBuf>,
    /// Absolute quadrature tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Maximum adaptive quadrature subdivisions [default: 2000].
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Root-finding tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,
    /// Maximum root-finding iterations [default: 200].
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Monte Carlo replications [default: 100000].
    #[arg(long, global = true)]
    pub replications: Option<u64>,
    /// Base seed of the random streams [default: 20240101].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads [default: available cores].
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Skip sweep cells with k above this value.
    #[arg(long, global = true)]
    pub max_k: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    Dd,
    Rinott,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcedureArg {
    Dd,
    Rinott,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Ceil,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NuModeArg {
    Approx,
    Exact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SizeModeArg {
    /// Expectation over the chi-square law of S².
    Exact,
    /// True variances in place of S².
    PlugIn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitPreset {
    /// Gaussian maxima normalised by (a_k, b_k) at level x.
    Gumbel,
    /// Student maxima at the Fréchet p-quantile threshold.
    Student,
    /// One fixed observation plus the maximum of the rest, constant threshold.
    FinitePlusInfinite,
    /// Difference of the maxima of two halves, threshold 0.
    SymmetricDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-stage sample size for selecting the s best of k.
    SolveN {
        #[arg(long)]
        k: u64,
        #[arg(long, conflicts_with = "s_rule")]
        s: Option<u64>,
        /// `half-sqrt` for s = ½√k, or `half-pow:A` for s = ½k^A.
        #[arg(long)]
        s_rule: Option<String>,
        #[arg(long, value_enum, default_value = "ceil")]
        rounding: RoundingArg,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
    },
    /// Two-stage constants h1 (Dudewicz–Dalal) and h2 (Rinott).
    SolveH {
        #[arg(long)]
        k: u64,
        /// Degrees of freedom N0 − 1; `inf` for known variances.
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "both")]
        which: WhichArg,
    },
    /// First-stage degrees of freedom minimising the second-stage size.
    OptimalNu {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "both")]
        mode: NuModeArg,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Common variance of the k + 1 populations.
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
    },
    /// Expected total sample size of a two-stage procedure.
    ExpectedN {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum)]
        procedure: ProcedureArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: SizeModeArg,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// One variance for all k + 1 populations, or k + 1 comma-separated values.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        sigma2: Vec<f64>,
        /// Use this constant instead of solving for it.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Monte Carlo probability of correct selection.
    Simulate {
        /// CSV with header `mean,variance`, one population per row.
        #[arg(long, conflicts_with = "lfc")]
        spec: Option<PathBuf>,
        /// Least favourable configuration with this many populations.
        #[arg(long)]
        lfc: Option<usize>,
        /// Variances for --lfc: one value or one per population.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        variances: Vec<f64>,
        #[arg(long, value_enum)]
        procedure: ProcedureArg,
        #[arg(long)]
        n0: u64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Limit of P(Σ α_t M_k^(t) ≤ ξ_k) for a preset partition, optionally with Monte Carlo at finite k.
    LimitLaw {
        #[arg(long, value_enum)]
        preset: LimitPreset,
        #[arg(long, default_value_t = 0.4)]
        x: f64,
        #[arg(long, default_value_t = 3.0)]
        nu: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        #[arg(long)]
        mc_k: Option<u64>,
    },
    /// Data behind the published tables and figures.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Degrees of freedom for table2.
        #[arg(long, default_value_t = 10.0)]
        nu: f64,
    },
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::load(self.config.as_deref())?;
        if let Some(v) = self.abs_tol {
            c.numerics.quad.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            c.numerics.quad.rel_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            c.numerics.quad.max_subdivisions = v;
        }
        if let Some(v) = self.root_tol {
            c.numerics.root.tol = v;
        }
        if let Some(v) = self.max_iter {
            c.numerics.root.max_iter = v;
        }
        if let Some(v) = self.replications {
            c.replications = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.workers {
            c.workers = v;
        }
        if let Some(v) = &self.output {
            c.output = Some(v.clone());
        }
        if let Some(v) = self.max_k {
            c.max_k = v;
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.global.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build()?;
    let table = pool.install(|| commands::execute(&cli.command, &config))?;
    match &config.output {
        Some(path) => table.write_to(std::fs::File::create(path)?),
        None => table.write_to(std::io::stdout().lock()),
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("rsel: {e}");
            e.exit_code()
        }
    }
}
