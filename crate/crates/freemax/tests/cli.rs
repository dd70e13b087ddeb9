//! End-to-end checks of the `freemax` binary: subcommand surface, output
//! formats, file emission, and exit codes.

use std::process::{Command, Output};

use freemax::harness::{ConvergenceReport, RateReference};

fn freemax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freemax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn list_shows_all_nine_entries() {
    let out = freemax(&["--format", "csv", "list"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 10); // header + nine rows
    for name in ["frechet", "cauchy", "uniform01", "std_normal"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn norming_frechet_closed_form() {
    let out = freemax(&[
        "--format", "csv", "norming", "--dist", "frechet", "--alpha", "2", "--n", "100",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
    assert!((fields[0] - 10.0).abs() < 1e-9, "a_n = {}", fields[0]);
    assert_eq!(fields[1], 0.0);
    assert!(fields[2] <= 1e-12);

    // same code path as the library: 17 significant digits round-trip the
    // exact bits
    let pair = freemax::builtin("frechet", &[2.0])
        .unwrap()
        .norming(100)
        .unwrap();
    assert_eq!(fields[0].to_bits(), pair.a.to_bits());
}

#[test]
fn density_uniform_closed_form() {
    // w_n = n (1 - e^{-1/n}) everywhere in the window
    let out = freemax(&[
        "--format", "csv", "density", "--dist", "uniform01", "--n", "1000", "--x", "-0.5",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let row = text.lines().nth(1).unwrap();
    let wn: f64 = row.split(',').next().unwrap().parse().unwrap();
    let expected = 1000.0 * -(-1.0f64 / 1000.0).exp_m1();
    assert!((wn - expected).abs() < 1e-12, "w_n = {wn} vs {expected}");

    // outside the window is a validation failure
    let out = freemax(&[
        "--format", "csv", "density", "--dist", "uniform01", "--n", "1000", "--x", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vonmises_writes_table() {
    let dir = std::env::temp_dir().join("freemax_cli_vonmises");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = freemax(&[
        "--format",
        "csv",
        "vonmises",
        "--dist",
        "log_logistic",
        "--alpha",
        "2",
        "--xmin",
        "0.5",
        "--xmax",
        "50",
        "--points",
        "40",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(&path).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("x,h,g"));
    assert_eq!(lines.count(), 40);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn converge_emits_parseable_files() {
    let dir = std::env::temp_dir().join("freemax_cli_converge");
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("frechet2");
    let out = freemax(&[
        "converge",
        "--dist",
        "frechet",
        "--alpha",
        "2",
        "--nmin",
        "100",
        "--nmax",
        "100000",
        "--per-decade",
        "2",
        "--grid",
        "5000",
        "--rate-ref",
        "n_inv",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read(format!("{}.csv", prefix.display())).unwrap();
    let report = ConvergenceReport::read_csv(csv.as_slice(), RateReference::NInv).unwrap();
    assert_eq!(report.per_n.len(), 7);
    assert!((-1.15..=-0.85).contains(&report.fitted_slope));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{}.json", prefix.display())).unwrap())
            .unwrap();
    assert!(json["bound_satisfied"].as_bool().unwrap());
    let slope = json["fitted_slope"].as_f64().unwrap();
    assert!((slope - report.fitted_slope).abs() < 1e-15);
    assert!(json["C"].is_number());

    let dat = std::fs::read_to_string(format!("{}.dat", prefix.display())).unwrap();
    assert_eq!(dat.lines().count(), 7);
    assert_eq!(dat.lines().next().unwrap().split(' ').count(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn converge_csv_stdout_roundtrip() {
    let out = freemax(&[
        "--format", "csv", "converge", "--dist", "endpoint_power", "--alpha", "-2", "--nmin",
        "100", "--nmax", "10000", "--per-decade", "1", "--grid", "2000",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report =
        ConvergenceReport::read_csv(out.stdout.as_slice(), RateReference::MaxOfBoth).unwrap();
    assert_eq!(report.per_n.len(), 3);
    // b_n sits at the right endpoint, so B_n = 0
    assert_eq!(report.per_n[0].window_hi, 0.0);
}

#[test]
fn witness_reports_and_exits_zero() {
    let out = freemax(&[
        "--format", "csv", "witness", "--alpha", "-0.25", "--n", "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let row = text.lines().nth(1).unwrap();
    let err: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(err >= 1.0);
}

#[test]
fn lemma_exit_codes() {
    // the U-gap bound is provable: exit 0
    let out = freemax(&["--format", "csv", "lemmas", "--which", "u-gap", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));

    // the stated Frechet-gap constant fails for this pair: exit 3
    let out = freemax(&[
        "--format", "csv", "lemmas", "--which", "frechet-gap", "--alpha1", "1", "--alpha2", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout_str(&out);
    let row = text.lines().nth(1).unwrap();
    let sup: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((sup - 0.25).abs() < 1e-9);

    // sandwich holds for the log-logistic entry
    let out = freemax(&[
        "lemmas", "--which", "sandwich", "--dist", "log_logistic", "--alpha", "2", "--n", "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validation_failures_exit_two() {
    assert_eq!(freemax(&["norming", "--dist", "nope", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        freemax(&["norming", "--dist", "frechet", "--n", "5"]).status.code(),
        Some(2),
        "missing --alpha"
    );
    assert_eq!(
        freemax(&["witness", "--alpha", "-0.8", "--n", "100"]).status.code(),
        Some(2),
        "alpha outside (-1/2, 0)"
    );
    assert_eq!(
        freemax(&[
            "converge", "--dist", "weibull", "--alpha", "-0.5", "--nmin", "100", "--nmax",
            "1000", "--grid", "2000",
        ])
        .status
        .code(),
        Some(2),
        "missing compact domain for shallow Weibull"
    );
    // with the override it runs
    let out = freemax(&[
        "--format", "csv", "converge", "--dist", "weibull", "--alpha", "-0.5", "--nmin",
        "100", "--nmax", "1000", "--grid", "2000", "--domain", "-0.9,-0.1",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn threads_env_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_freemax"))
        .env("FREEMAX_THREADS", "2")
        .args(["--format", "csv", "list"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
