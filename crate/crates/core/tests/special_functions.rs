use proptest::prelude::*;
use rsel_core::extreme_values::gamma_nu;
use rsel_core::special::*;
use rsel_core::{integrate, integrate_points, QuadConfig};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// Reference values below were produced with 40-digit mpmath.

#[test]
fn ln_gamma_values() {
    assert!(close(ln_gamma(1.0).unwrap(), 0.0, 1e-13));
    assert!(close(ln_gamma(0.5).unwrap(), 0.572_364_942_924_700_1, 1e-14));
    assert!(close(ln_gamma(5.0).unwrap(), 24f64.ln(), 1e-14));
    assert!(close(ln_gamma(0.7).unwrap(), 0.260_867_246_531_666_6, 1e-13));
    assert!(close(ln_gamma(123.4).unwrap(), 469.336_097_442_190_6, 1e-11));
    assert!(rel(ln_gamma(1e6).unwrap(), 12_815_504.569_147_612) < 1e-15);
    assert!(ln_gamma(0.0).is_err());
    assert!(ln_gamma(-2.5).is_err());
}

#[test]
fn digamma_values() {
    let euler = 0.577_215_664_901_532_9;
    assert!(close(digamma(1.0).unwrap(), -euler, 1e-13));
    assert!(close(digamma(0.5).unwrap(), -euler - 2.0 * 2f64.ln(), 1e-13));
    assert!(close(digamma(0.3).unwrap(), -3.502_524_222_200_133, 1e-12));
    assert!(close(digamma(1000.5).unwrap(), 6.907_755_320_648_796, 1e-12));
    for x in [0.3, 2.0, 17.0] {
        assert!(close(digamma(x + 1.0).unwrap() - digamma(x).unwrap(), 1.0 / x, 1e-12));
    }
    assert!(digamma(0.0).is_err());
}

#[test]
fn trigamma_values() {
    let pi2 = std::f64::consts::PI.powi(2);
    assert!(close(trigamma(1.0).unwrap(), pi2 / 6.0, 1e-12));
    assert!(close(trigamma(0.5).unwrap(), pi2 / 2.0, 1e-12));
    assert!(close(trigamma(0.2).unwrap(), 26.267_377_205_423_776, 1e-11));
    assert!(close(trigamma(55.5).unwrap(), 0.018_181_317_363_221_76, 1e-13));
    assert!(close(trigamma(4.0).unwrap(), trigamma(3.0).unwrap() - 1.0 / 9.0, 1e-12));
    assert!(trigamma(-1.0).is_err());
}

#[test]
fn normal_values() {
    assert_eq!(normal_cdf(0.0).value, 0.5);
    assert!(close(normal_quantile(0.95).unwrap(), 1.644_853_626_951_472_2, 1e-12));
    assert!(close(normal_cdf(-2.7).value + normal_cdf(2.7).value, 1.0, 1e-15));
    assert!(close(normal_cdf(-40.0).log_value, -804.608_442_013_753_8, 1e-9));
    assert!(normal_quantile(0.0).is_err());
    assert!(normal_quantile(1.0).is_err());
    assert!(close(normal_pdf(0.0), 1.0 / (2.0 * std::f64::consts::PI).sqrt(), 1e-16));
}

#[test]
fn student_values() {
    for nu in [0.5, 1.0, 3.0, 40.0] {
        assert_eq!(student_t_cdf(0.0, nu).unwrap().value, 0.5);
    }
    assert!(close(student_t_cdf(1.0, 1.0).unwrap().value, 0.75, 1e-14));
    assert!(close(student_t_cdf(1.3, 1e8).unwrap().value, normal_cdf(1.3).value, 1e-6));
    assert!(rel(student_t_cdf(1.7, 4.5).unwrap().value, 0.921_823_043_932_051_1) < 1e-12);
    assert!(close(student_t_cdf(-30.0, 2.5).unwrap().log_value, -8.835_112_127_834_407, 1e-11));
    assert!(student_t_cdf(0.0, 0.0).is_err());
    assert!(student_t_pdf(1.0, -1.0).is_err());
}

#[test]
fn student_density_normalised() {
    let cfg = QuadConfig::default();
    for nu in [1.0, 2.0, 5.0, 30.0] {
        let d = StudentT::new(nu).unwrap();
        let total = integrate(|t| d.pdf(t), f64::NEG_INFINITY, f64::INFINITY, &cfg).unwrap().value;
        assert!(close(total, 1.0, 1e-9), "{nu}: {total}");
    }
}

#[test]
fn hypergeometric_values() {
    assert_eq!(gauss_hypergeometric(0.3, 2.0, 1.5, 0.0).unwrap(), 1.0);
    assert!(rel(gauss_hypergeometric(1.0, 1.0, 2.0, 0.5).unwrap(), 2.0 * 2f64.ln()) < 1e-12);
    assert!(rel(gauss_hypergeometric(0.3, 1.7, 2.2, 0.95).unwrap(), 1.716_666_523_449_445) < 1e-10);
    assert!(rel(gauss_hypergeometric(2.0, -1.5, 3.5, 0.4).unwrap(), 0.681_261_609_050_840_8) < 1e-10);
    let nu = 3.0;
    let gauss = (ln_gamma(nu / 2.0 + 1.0).unwrap() + ln_gamma(nu / 2.0).unwrap()
        - ln_gamma(0.5).unwrap()
        - ln_gamma(nu + 0.5).unwrap())
    .exp();
    let at_one = gauss_hypergeometric((nu + 1.0) / 2.0, (1.0 - nu) / 2.0, nu / 2.0 + 1.0, 1.0).unwrap();
    assert!(rel(at_one, gauss) < 1e-12);
    assert!(gauss_hypergeometric(1.0, 1.0, 1.5, 1.0).is_err());
    assert!(gauss_hypergeometric(1.0, 1.0, -2.0, 0.3).is_err());
}

#[test]
fn extreme_value_laws() {
    let e1 = (-1f64).exp();
    for nu in [0.5, 2.0, 7.0] {
        assert!(close(frechet_quantile(e1, nu).unwrap(), 1.0, 1e-15));
    }
    assert!(close(frechet_quantile(0.5, 1.0).unwrap(), 1.0 / 2f64.ln(), 1e-15));
    let q = frechet_quantile(0.37, 4.5).unwrap();
    assert!(close(frechet_cdf(q, 4.5).unwrap(), 0.37, 1e-12));
    assert_eq!(frechet_cdf(-1.0, 3.0).unwrap(), 0.0);
    assert!(frechet_quantile(1.0, 2.0).is_err());
    assert!(frechet_cdf(1.0, 0.0).is_err());
    assert!(close(gumbel_quantile(e1).unwrap(), 0.0, 1e-15));
    assert!(close(gumbel_cdf(0.0), e1, 1e-16));
    assert!(close(gumbel_quantile(0.95).unwrap(), -(-(0.95f64).ln()).ln(), 1e-14));
    assert!(gumbel_quantile(0.0).is_err());
}

#[test]
fn chi_square_values() {
    assert_eq!(chi2_cdf(0.0, 3.0).unwrap(), 0.0);
    assert!(close(chi2_cdf(3.0, 2.0).unwrap(), 1.0 - (-1.5f64).exp(), 1e-14));
    assert!(close(chi2_cdf(4f64.ln(), 2.0).unwrap(), 0.5, 1e-13));
    assert!(rel(chi2_cdf(7.3, 5.5).unwrap(), 0.755_032_046_201_396) < 1e-12);
    assert!(chi2_cdf(-1.0, 2.0).is_err());
    assert!(chi2_cdf(1.0, 0.0).is_err());
}

#[test]
fn quantile_round_trips() {
    for i in 0..100 {
        let p = 0.001 + 0.998 * i as f64 / 99.0;
        assert!(close(normal_cdf(normal_quantile(p).unwrap()).value, p, 1e-12));
        assert!(close(gumbel_cdf(gumbel_quantile(p).unwrap()), p, 1e-10));
        assert!(close(frechet_cdf(frechet_quantile(p, 2.5).unwrap(), 2.5).unwrap(), p, 1e-10));
        for nu in [1.0, 3.5, 20.0] {
            let d = StudentT::new(nu).unwrap();
            assert!(close(d.cdf(d.quantile(p)).value, p, 1e-10), "{nu} {p}");
        }
    }
}

#[test]
fn two_t_sum_density() {
    assert!(close(two_t_sum_pdf(0.0, 1.0).unwrap(), 1.0 / (2.0 * std::f64::consts::PI), 1e-12));
    let cfg = QuadConfig::default();
    let total = integrate(|t| two_t_sum_pdf(t, 3.0).unwrap(), f64::NEG_INFINITY, f64::INFINITY, &cfg).unwrap();
    assert!(close(total.value, 1.0, 1e-9));
    let ratio = two_t_sum_pdf(200.0, 5.0).unwrap() / (2.0 * student_t_pdf(200.0, 5.0).unwrap());
    assert!(close(ratio, 1.0, 0.02));
    assert!(two_t_sum_pdf(1.0, 0.0).is_err());
}

#[test]
fn two_t_sum_matches_self_convolution() {
    let cfg = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-12, ..QuadConfig::default() };
    for nu in [1.0, 3.0, 8.0] {
        let d = StudentT::new(nu).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=40 {
            let t = -10.0 + 0.5 * i as f64;
            let conv = integrate_points(
                |s| d.pdf(s) * d.pdf(t - s),
                &[f64::NEG_INFINITY, t.min(0.0), t.max(0.0), f64::INFINITY],
                &cfg,
            )
            .unwrap()
            .value;
            worst = worst.max((conv - two_t_sum_pdf(t, nu).unwrap()).abs());
        }
        assert!(worst < 1e-6, "nu = {nu}: {worst:e}");
    }
}

#[test]
fn two_t_sum_tail_law() {
    // the tail mass is ~1e-15, so only a relative tolerance is meaningful
    let cfg = QuadConfig { abs_tol: 0.0, rel_tol: 1e-10, ..QuadConfig::default() };
    for nu in [2.0, 5.0] {
        let t = 1e3;
        let tail = integrate(|x| two_t_sum_pdf(x, nu).unwrap(), t, f64::INFINITY, &cfg).unwrap().value;
        let law = 2.0 * gamma_nu(nu).unwrap().powf(nu) * t.powf(-nu);
        assert!(close(tail / law, 1.0, 0.03), "nu = {nu}: {}", tail / law);
    }
}

#[test]
fn log_values_agree() {
    for x in [-30.0, -5.0, 0.3, 6.0] {
        let e = normal_cdf(x);
        assert!(rel(e.log_value.exp(), e.value) < 1e-12);
        let e = student_t_cdf(x, 3.5).unwrap();
        assert!(rel(e.log_value.exp(), e.value) < 1e-12);
    }
}

proptest! {
    #[test]
    fn student_cdf_monotone_and_bounded(a in -50.0f64..50.0, b in -50.0f64..50.0, nu in 0.5f64..60.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let d = StudentT::new(nu).unwrap();
        let (f_lo, f_hi) = (d.cdf(lo).value, d.cdf(hi).value);
        prop_assert!((0.0..=1.0).contains(&f_lo) && (0.0..=1.0).contains(&f_hi));
        prop_assert!(f_lo <= f_hi);
        prop_assert!((d.cdf(-hi).value - d.sf(hi).value).abs() < 1e-14);
    }

    #[test]
    fn two_t_sum_symmetric(t in 0.0f64..500.0, nu in 0.5f64..40.0) {
        prop_assert_eq!(two_t_sum_pdf(t, nu).unwrap(), two_t_sum_pdf(-t, nu).unwrap());
    }

    #[test]
    fn chi2_monotone(x in 0.0f64..200.0, dx in 0.0f64..10.0, nu in 0.5f64..80.0) {
        let a = chi2_cdf(x, nu).unwrap();
        let b = chi2_cdf(x + dx, nu).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && a <= b + 1e-15);
    }

    #[test]
    fn normal_cdf_monotone(a in -60.0f64..60.0, d in 0.0f64..5.0) {
        prop_assert!(normal_cdf(a).value <= normal_cdf(a + d).value);
        prop_assert!(normal_cdf(a).log_value <= normal_cdf(a + d).log_value);
    }
}
