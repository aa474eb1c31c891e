use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{func} did not converge within {iterations} iterations")]
    NoConvergence { func: &'static str, iterations: usize },

    #[error(
        "quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e} after {subdivisions} subdivisions"
    )]
    Quadrature { estimate: f64, tolerance: f64, subdivisions: usize },

    #[error("could not bracket a root of {0}")]
    Bracket(&'static str),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("no positive sample size reaches p = {p}: probability at n = 0 is already {at_zero}")]
    TrivialSampleSize { p: f64, at_zero: f64 },

    #[error("k = {k} is too small: {reason}")]
    KTooSmall { k: u64, reason: String },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported sequence descriptor: {0}")]
    Unsupported(String),

    #[error("best population is ambiguous: indices {first} and {second} share the largest mean")]
    AmbiguousBest { first: usize, second: usize },

    #[error("post-condition violated: {0}")]
    PostCondition(String),

    #[error("weights infeasible: (delta/h)^2 = {target:e} is below S^2/N = {floor:e}")]
    InfeasibleWeights { target: f64, floor: f64 },
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }

    /// True for errors caused by the inputs rather than numerical trouble.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::InvalidSpec(_)
                | Error::Unsupported(_)
                | Error::AmbiguousBest { .. }
                | Error::KTooSmall { .. }
                | Error::TrivialSampleSize { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
