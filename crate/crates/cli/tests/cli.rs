use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use toral_core::MomentSummary;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toral-mass"))
        .args(args)
        .env_remove("TORAL_MASS_THREADS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_config(dir: &Path) -> String {
    write_config(
        dir,
        "small.json",
        r#"{
            "n": 65, "d": 2,
            "coefficients": {"type": "bourgain", "seed": 3},
            "T": "3",
            "mc": {"M": 3000, "seed": 9, "batch": 256},
            "restriction": {"x0": ["0.25", "0.5"], "rho": "0.2"},
            "moments_upto": 4,
            "flatness": {"eps": "0.1", "T": "3", "eta": "0.5"}
        }"#,
    )
}

#[test]
fn missing_config_is_a_validation_error() {
    let out = bin(&["variance", "--config", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read missing.json"));
}

#[test]
fn malformed_config_and_unknown_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"n": 65, "d": 2,"#);
    assert_eq!(bin(&["variance", "--config", &cfg]).status.code(), Some(1));
    let cfg = write_config(
        dir.path(),
        "wide.json",
        r#"{"n": 65, "d": 2, "coefficients": {"type": "bourgain", "seed": 1}, "r": "0.6"}"#,
    );
    assert_eq!(bin(&["variance", "--config", &cfg]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_errors_exit_with_two() {
    let out = bin(&["correlations", "--n", "25", "--dim", "2", "--l", "4", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn hypotheses_report() {
    let out = bin(&["hypotheses", "--n", "25", "--dim", "2", "--eps", "0.5", "--l", "4", "--delta", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], 12);
    assert!(v["D"]["holds"].is_boolean());
    assert!(v["D"]["margin"].is_f64());
    assert!(v["A"]["holds"].is_boolean());
    assert!(v["A"]["K"].is_f64());
}

#[test]
fn selftest_passes() {
    let out = bin(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let out = bin(&["specfun", "selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integral of h2"));
}

#[test]
fn lattice_and_correlation_csv() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("p.csv");
    let out = bin(&["lattice", "--n", "3", "--dim", "3", "--discrepancy", "--out", points.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], 8);
    assert_eq!(v["discrepancy"]["exact"], true);
    let text = fs::read_to_string(&points).unwrap();
    assert_eq!(text.lines().next().unwrap(), "index,x,y,z");
    assert_eq!(text.lines().count(), 9);

    let tuples = dir.path().join("t.csv");
    let out = bin(&["correlations", "--n", "5", "--dim", "2", "--l", "4", "--tuples", tuples.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count_S"], 168);
    let mut rdr = csv::Reader::from_path(&tuples).unwrap();
    assert_eq!(rdr.headers().unwrap().len(), 9);
    assert_eq!(rdr.records().count(), 168);
}

#[test]
fn experiment_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());

    let out = bin(&["variance", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let s: MomentSummary = serde_json::from_slice(&out.stdout).unwrap();
    assert!(s.variance.mc.is_none());
    assert_eq!(s.variance.spectral_label, "exact");

    let out = bin(&["flatness", "--config", &cfg]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["memberships"]["bourgain"], true);

    let out = bin(&["restricted", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["variance"]["exact"].is_f64());

    let out = bin(&["pairdist", "--config", &cfg, "--grid", "0:2:0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(rdr.headers().unwrap().len(), 4);
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.len() == 4));
}

#[test]
fn overrides_replace_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = bin(&["clt", "--config", &cfg, "--n", "85", "--M", "500", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s: MomentSummary = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s.n, 85);
    assert_eq!(s.ks.unwrap().sample_count, 500);
}

#[test]
fn clt_outputs_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let mut reports = Vec::new();
    let mut samples = Vec::new();
    for (i, threads) in ["1", "3", "1"].iter().enumerate() {
        let report = dir.path().join(format!("r{i}.json"));
        let csv_path = dir.path().join(format!("s{i}.csv"));
        let manifest = dir.path().join(format!("m{i}.json"));
        let out = bin(&[
            "clt",
            "--config",
            &cfg,
            "--threads",
            threads,
            "--report",
            report.to_str().unwrap(),
            "--samples-out",
            csv_path.to_str().unwrap(),
            "--manifest",
            manifest.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let r = fs::read(&report).unwrap();
        let s = fs::read(&csv_path).unwrap();
        let m: serde_json::Value = serde_json::from_slice(&fs::read(&manifest).unwrap()).unwrap();
        assert_eq!(m["threads"], threads.parse::<u64>().unwrap());
        assert_eq!(m["seed"], 9);
        assert_eq!(m["config"]["n"], 65);
        assert_eq!(m["checksums"]["report"], toral_mass::report::sha256_hex(&r));
        assert_eq!(m["checksums"]["samples"], toral_mass::report::sha256_hex(&s));
        reports.push(r);
        samples.push(s);
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
    assert!(samples.windows(2).all(|w| w[0] == w[1]));

    let summary: MomentSummary = serde_json::from_slice(&reports[0]).unwrap();
    let again = toral_mass::report::to_json(&summary).unwrap();
    assert_eq!(again, reports[0]);

    let mut rdr = csv::Reader::from_reader(&samples[0][..]);
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["index", "x1", "x2", "X", "X_standardized"]
    );
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3000);
    assert!(rows.iter().all(|r| r.len() == 5));
}

#[test]
fn thread_variable_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    let out = Command::new(env!("CARGO_BIN_EXE_toral-mass"))
        .args(["lattice", "--n", "5", "--dim", "2", "--manifest", manifest.to_str().unwrap()])
        .env("TORAL_MASS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(&manifest).unwrap()).unwrap();
    assert_eq!(m["threads"], 2);
    let out = Command::new(env!("CARGO_BIN_EXE_toral-mass"))
        .args(["lattice", "--n", "5", "--dim", "2"])
        .env("TORAL_MASS_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
