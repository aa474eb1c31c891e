//! Indifference-zone ranking and selection.
//!
//! Single-stage sample sizes, two-stage constants for the Dudewicz–Dalal
//! and Rinott procedures, their extreme-value asymptotics, optimal
//! first-stage sizes, simulation of the procedures, and the special
//! functions these rest on.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod extreme_values;
pub mod procedures;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod single_stage;
pub mod special;
pub mod stats;
pub mod two_stage;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quadrature::{integrate, integrate_points, Integral, QuadConfig};
pub use roots::{RootConfig, SolveResult};

/// Quadrature and root-finding settings shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Numerics {
    pub quad: QuadConfig,
    pub root: RootConfig,
}
