use std::path::PathBuf;
use std::process::{Command, Output};

use rsel_cli::output::number;

fn rsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsel"))
        .args(args)
        .env_remove("RSEL_CONFIG")
        .current_dir(std::env::temp_dir())
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = rsel(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows as header-keyed maps.
fn rows(csv_text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| headers.iter().map(String::from).zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn num(row: &std::collections::HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("{key} = {:?}", row[key]))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rsel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_n_two_populations() {
    let r = rows(&stdout(&["solve-n", "--k", "2", "--s", "1", "--p", "0.95", "--delta", "1", "--sigma2", "1"]));
    let z = 1.644_853_626_951_472_2_f64;
    assert!((num(&r[0], "n_exact") / (2.0 * z * z) - 1.0).abs() < 1e-6);
}

#[test]
fn solve_n_half_sqrt_rule() {
    let r = rows(&stdout(&["solve-n", "--k", "1000", "--s-rule", "half-sqrt", "--p", "0.95"]));
    assert_eq!(r[0]["s"], "16");
    assert!((num(&r[0], "rel_err") - 0.069).abs() < 0.01);
}

#[test]
fn bad_arguments_exit_2() {
    let out = rsel(&["solve-n", "--k", "2", "--s", "1", "--p", "0.5", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rsel(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rsel(&["solve-h", "--k", "10", "--nu", "3"]).status.code(), Some(2));
    assert_eq!(rsel(&["solve-h", "--k", "10", "--nu", "3", "--p", "0.9", "--workers", "0"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let out = rsel(&["solve-h", "--k", "100", "--nu", "5", "--p", "0.9", "--max-iter", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_h_examples() {
    let r = rows(&stdout(&["solve-h", "--k", "1", "--nu", "5", "--p", "0.5", "--which", "both"]));
    assert_eq!(num(&r[0], "h1"), 0.0);
    assert_eq!(num(&r[0], "h2"), 0.0);

    let r = rows(&stdout(&["solve-h", "--k", "1000000", "--nu", "5", "--p", "0.5"]));
    let limit = 2f64.powf(0.4);
    assert!((num(&r[0], "ratio_sq") / limit - 1.0).abs() < 0.05);
    assert!((num(&r[0], "ratio_sq_limit") - 1.319_507_91).abs() < 1e-8);

    let r = rows(&stdout(&["solve-h", "--k", "10", "--nu", "3", "--p", "0.95"]));
    let (h1, h2) = (num(&r[0], "h1"), num(&r[0], "h2"));
    assert!(h1 > 0.0 && h1 <= h2);
}

#[test]
fn solve_h_single_procedure_leaves_other_columns_empty() {
    let r = rows(&stdout(&["solve-h", "--k", "10", "--nu", "3", "--p", "0.95", "--which", "dd"]));
    assert!(num(&r[0], "h1") > 0.0);
    assert_eq!(r[0]["h2"], "");
    assert_eq!(r[0]["ratio_sq"], "");
}

#[test]
fn table1_cell() {
    let r = rows(&stdout(&["reproduce", "table1", "--max-k", "10000"]));
    assert_eq!(r.len(), 16);
    let cell = r.iter().find(|row| row["k"] == "10000" && row["p"] == "0.99").unwrap();
    assert!((num(cell, "rel_err") + 0.071).abs() < 0.01);
}

#[test]
fn table2_cell() {
    let r = rows(&stdout(&["reproduce", "table2", "--max-k", "100", "--nu", "10"]));
    let cell = r.iter().find(|row| row["k"] == "10" && row["p"] == "0.5").unwrap();
    assert!((num(cell, "h1_rel_err") - 0.975).abs() < 0.05);
}

#[test]
fn fig3_exact_nu_monotone_in_k() {
    let r = rows(&stdout(&["reproduce", "fig3", "--max-k", "1000"]));
    for p in ["0.5", "0.95"] {
        let nus: Vec<f64> = r.iter().filter(|row| row["p"] == p).map(|row| num(row, "nu_exact")).collect();
        assert!(nus.len() >= 5);
        assert!(nus.windows(2).all(|w| w[1] > w[0]), "{p}: {nus:?}");
        for row in r.iter().filter(|row| row["p"] == p) {
            let (nu, h) = (num(row, "nu_exact"), num(row, "h1_at_exact"));
            assert!((nu + 2.0 - h * h).abs() < 1e-6);
        }
    }
}

#[test]
fn csv_round_trips() {
    let path = scratch("table2.csv");
    let p = path.to_str().unwrap();
    stdout(&["reproduce", "table2", "--max-k", "1000", "--output", p]);
    let original = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(original.as_bytes());
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(reader.headers().unwrap()).unwrap();
    for rec in reader.records() {
        let cells: Vec<String> = rec
            .unwrap()
            .iter()
            .map(|c| match c.parse::<f64>() {
                Ok(x) => number(x),
                Err(_) => c.to_string(),
            })
            .collect();
        writer.write_record(&cells).unwrap();
    }
    let again = String::from_utf8(writer.into_inner().unwrap()).unwrap();
    assert_eq!(original, again);
    assert!(original.starts_with("k,nu,p,h1,h1_tilde,h1_rel_err,h2,h2_tilde,h2_rel_err,ratio_sq,ratio_sq_limit\n"));
}

#[test]
fn headers_are_exact() {
    let t1 = stdout(&["reproduce", "table1", "--max-k", "10"]);
    assert!(t1.starts_with("k,p,n_exact,n_asymptotic,rel_err\n"));
    let f3 = stdout(&["reproduce", "fig3", "--max-k", "10"]);
    assert!(f3.starts_with("k,p,nu_exact,nu_approx,h1_at_exact,h1_tilde_at_approx,mu_exact,mu_tilde\n"));
}

const SIM: &[&str] = &[
    "simulate",
    "--lfc",
    "6",
    "--variances",
    "0.5,0.8,1.1,1.4,1.7,2",
    "--procedure",
    "dd",
    "--n0",
    "10",
    "--p",
    "0.9",
    "--replications",
    "4000",
];

#[test]
fn simulate_meets_guarantee_and_is_deterministic() {
    let a = stdout(SIM);
    let r = rows(&a);
    assert!(num(&r[0], "p_hat") + 3.0 * num(&r[0], "ci_half_width") >= 0.9);
    assert_eq!(a, stdout(SIM));
    let mut one = SIM.to_vec();
    one.extend(["--workers", "1"]);
    let mut eight = SIM.to_vec();
    eight.extend(["--workers", "8"]);
    assert_eq!(stdout(&one), stdout(&eight));
}

#[test]
fn simulate_from_spec_file() {
    let spec = scratch("populations.csv");
    std::fs::write(&spec, "mean,variance\n0,1\n0,1\n10,1\n").unwrap();
    let r = rows(&stdout(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--procedure",
        "rinott",
        "--n0",
        "5",
        "--p",
        "0.9",
        "--replications",
        "500",
    ]));
    assert_eq!(num(&r[0], "p_hat"), 1.0);
    assert_eq!(r[0]["populations"], "3");
}

#[test]
fn config_file_then_flags() {
    let conf = scratch("seed.conf");
    std::fs::write(&conf, "# test\nseed = 99\nreplications = 300\n").unwrap();
    let base = ["simulate", "--lfc", "3", "--procedure", "rinott", "--n0", "5", "--p", "0.9"];
    let mut with_file = base.to_vec();
    with_file.extend(["--config", conf.to_str().unwrap()]);
    let r = rows(&stdout(&with_file));
    assert_eq!(r[0]["seed"], "99");
    assert_eq!(r[0]["replications"], "300");

    let mut flag_wins = with_file.clone();
    flag_wins.extend(["--seed", "5"]);
    assert_eq!(rows(&stdout(&flag_wins))[0]["seed"], "5");

    let out = Command::new(env!("CARGO_BIN_EXE_rsel")).args(base).env("RSEL_CONFIG", &conf).output().unwrap();
    assert!(out.status.success());
    assert_eq!(rows(&String::from_utf8(out.stdout).unwrap())[0]["seed"], "99");

    let bad = scratch("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    let mut with_bad = base.to_vec();
    with_bad.extend(["--config", bad.to_str().unwrap()]);
    assert_eq!(rsel(&with_bad).status.code(), Some(2));
}

#[test]
fn limit_law_presets() {
    let r = rows(&stdout(&["limit-law", "--preset", "finite-plus-infinite"]));
    assert_eq!(r[0]["l"], "0");
    assert_eq!(r[0]["l_star"], "-inf");
    let r = rows(&stdout(&["limit-law", "--preset", "student", "--nu", "3", "--p", "0.5"]));
    assert!((num(&r[0], "l") - 0.5).abs() < 1e-9);
    let r =
        rows(&stdout(&["limit-law", "--preset", "symmetric-difference", "--mc-k", "1000", "--replications", "2000"]));
    assert!((num(&r[0], "mc_p_hat") - 0.5).abs() < 3.0 * num(&r[0], "mc_ci_half_width"));
}

#[test]
fn optimal_nu_and_expected_n() {
    let r = rows(&stdout(&["optimal-nu", "--k", "10000", "--p", "0.5"]));
    let ratio = num(&r[0], "nu_approx") / (2.0 * 10_000f64.ln());
    assert!((0.75..=1.3).contains(&ratio));
    let r =
        rows(&stdout(&["expected-n", "--k", "4", "--nu", "4", "--p", "0.9", "--procedure", "rinott", "--h", "1e-6"]));
    assert!((num(&r[0], "expected_n") - 30.0).abs() < 1e-9);
}
