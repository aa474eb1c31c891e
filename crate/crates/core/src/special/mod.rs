//! Special functions and the distributions built on them.

pub mod evd;
pub mod gamma;
pub mod hypergeometric;
pub mod incomplete;
pub mod normal;
pub mod student;
pub mod two_t;

pub use evd::{chi2_cdf, frechet_cdf, frechet_pdf, frechet_quantile, gumbel_cdf, gumbel_pdf, gumbel_quantile};
pub use gamma::{digamma, ln_beta, ln_gamma, ln_gamma_ratio, trigamma};
pub use hypergeometric::gauss_hypergeometric;
pub use incomplete::{regularized_beta, regularized_gamma_p, regularized_gamma_q};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, normal_quantile_upper, normal_sf, DistributionEval};
pub use student::{student_t_cdf, student_t_pdf, StudentT};
pub use two_t::two_t_sum_pdf;
