//! End-to-end runs of the `outlier-lab` binary.

use outlier_lab::critical::critical_imag_density;
use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_outlier-lab"));
    c.env_remove("OUTLIER_LAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ld_density_has_one_row_per_grid_point() {
    let out = ok(&["density", "--model", "ld", "--n", "50", "--gamma", "2", "--grid", "0.05:1.95:400"]);
    let r = rows(&out);
    assert_eq!(r.len(), 400);
    assert_eq!((r[0][0], r[399][0]), (0.05, 1.95));
    assert!(r.iter().all(|row| row.len() == 2 && row[1] > 0.0));
    assert!(out.lines().next().unwrap().starts_with("# command=density"));
}

#[test]
fn critical_imag_dispatch_is_exact() {
    let out = ok(&["density", "--model", "critical-imag", "--alpha", "0", "--grid", "0.05:5:200"]);
    let r = rows(&out);
    assert_eq!(r.len(), 200);
    for row in r {
        assert_eq!(row[1], critical_imag_density(0.0, row[0]).unwrap());
    }
}

#[test]
fn negative_arguments_are_accepted() {
    let out = ok(&["density", "--model", "critical-imag", "--alpha", "-1.5", "--grid", "0.5:1:3"]);
    assert_eq!(rows(&out)[0][1], critical_imag_density(-1.5, 0.5).unwrap());
    let out = ok(&[
        "density", "--model", "finite-2d", "--n", "5", "--gamma", "0.5", "--grid", "-1:1:3", "--grid2",
        "0.1:0.2:2",
    ]);
    assert_eq!(rows(&out).len(), 6);
}

#[test]
fn cue_xmin_is_non_decreasing() {
    let out = ok(&["density", "--model", "cue-xmin", "--t", "1", "--grid", "0.01:0.99:99"]);
    let v: Vec<f64> = rows(&out).iter().map(|r| r[1]).collect();
    assert_eq!(v.len(), 99);
    assert!(v.windows(2).all(|w| w[1] >= w[0]));
    assert!(v.iter().all(|&x| (0.0..=1.0).contains(&x)));
}

#[test]
fn json_output_is_column_major() {
    let out = ok(&["density", "--model", "limit-imag", "--gamma", "2", "--grid", "0.5:2:4", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["manifest"]["command"], "density");
    assert_eq!(v["manifest"]["parameters"]["gamma"], 2.0);
    assert_eq!(v["data"]["y"].as_array().unwrap().len(), 4);
    assert_eq!(v["data"]["value"].as_array().unwrap().len(), 4);
}

#[test]
fn density_errors_map_to_exit_codes() {
    assert_eq!(code(&["density", "--model", "nonsense", "--grid", "0:1:3"]), 2);
    assert_eq!(code(&["density", "--model", "ld", "--gamma", "2", "--grid", "0.1:1:3"]), 2);
    let o = run(&["density", "--model", "ld", "--gamma", "2", "--grid", "0.1:1:3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n"));
    assert_eq!(code(&["density", "--model", "ld", "--n", "50", "--gamma", "2", "--grid", "0.1:1"]), 2);
    assert_eq!(code(&["density", "--model", "ld", "--n", "50", "--gamma", "2", "--grid", "0.5:2.5:3"]), 3);
    assert_eq!(code(&["density", "--model", "outlier-pdf", "--n", "50", "--gamma", "0.5", "--grid", "0.1:0.4:3"]), 3);
}

#[test]
fn analyze_reports_constants() {
    let v = json(&ok(&["analyze", "--what", "stationary", "--gamma", "2"]));
    assert_eq!(v["data"]["y_star"], 1.5);
    let y2 = v["data"]["y_double_star"].as_f64().unwrap();
    assert!((y2 - (3.0 - 3f64.sqrt()) / 2.0).abs() < 1e-15);

    let v = json(&ok(&["analyze", "--what", "sigma", "--gamma", "2"]));
    assert!((v["data"]["sigma"].as_f64().unwrap() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);

    let v = json(&ok(&["analyze", "--what", "alpha0", "--tol", "5e-4"]));
    let (lo, hi) = (v["data"]["lo"].as_f64().unwrap(), v["data"]["hi"].as_f64().unwrap());
    assert!(0.6485 < lo && lo < hi && hi < 0.649, "({lo}, {hi})");

    let v = json(&ok(&["analyze", "--what", "q6-roots", "--alpha", "3"]));
    assert_eq!(v["data"]["coefficients"].as_array().unwrap().len(), 7);
    assert!(!v["data"]["real_roots"].as_array().unwrap().is_empty());

    let v = json(&ok(&["analyze", "--what", "extreme-scale", "--n", "100", "--gamma", "0.5"]));
    assert!(v["data"]["y_e"].as_f64().unwrap() > 0.0);

    assert_eq!(code(&["analyze", "--what", "sigma", "--gamma", "0.5"]), 3);
    assert_eq!(code(&["analyze", "--what", "sigma"]), 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"what": "stationary", "gamma": 3.0}"#).unwrap();
    let v = json(&ok(&["analyze", "--config", path(&cfg), "--gamma", "2"]));
    assert_eq!(v["manifest"]["parameters"]["gamma"], 2.0);
    assert_eq!(v["data"]["y_star"], 1.5);
    let v = json(&ok(&["analyze", "--config", path(&cfg)]));
    assert_eq!(v["manifest"]["parameters"]["gamma"], 3.0);

    fs::write(&cfg, r#"{"what": "stationary", "gamma_typo": 3.0}"#).unwrap();
    assert_eq!(code(&["analyze", "--config", path(&cfg)]), 2);
}

fn sample_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut a = vec![
        "sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "3000", "--observables",
        "imag-hist,ymax,exceed-counts,min-modulus", "--thresholds", "-0.5,0.5", "--bins", "0:2:40", "--out", out,
    ];
    a.extend_from_slice(extra);
    a
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn sample_is_byte_identical_across_reruns_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    ok(&sample_args(path(&out), &["--seed", "7", "--workers", "1"]));
    let first = snapshot(&out);
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        ["exceed-counts.csv", "imag-hist.csv", "min-modulus.csv", "summary.json", "ymax-samples.csv", "ymax.csv"]
    );
    ok(&sample_args(path(&out), &["--seed", "7", "--workers", "3"]));
    assert_eq!(snapshot(&out), first);

    let o = bin()
        .args(sample_args(path(&out), &[]))
        .env("OUTLIER_LAB_SEED", "7")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(snapshot(&out), first);

    ok(&sample_args(path(&out), &["--seed", "8"]));
    assert_ne!(snapshot(&out), first);
}

#[test]
fn sample_summary_and_tables_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    ok(&sample_args(path(&out), &["--seed", "1"]));
    let s = json(&fs::read_to_string(out.join("summary.json")).unwrap());
    assert_eq!(s["data"]["trials_done"], 3000);
    assert_eq!(s["data"]["failures"], 0);
    assert_eq!(s["manifest"]["master_seed"], 1);
    assert_eq!(s["data"]["imag_hist"]["samples_total"], 30000);
    let ex = s["data"]["exceed_counts"].as_array().unwrap();
    assert!(ex[0]["total"].as_u64().unwrap() >= ex[1]["total"].as_u64().unwrap());

    let per_trial = rows(&fs::read_to_string(out.join("exceed-counts.csv")).unwrap());
    assert_eq!(per_trial.len(), 3000);
    assert!(per_trial.iter().all(|r| r[1] >= r[2]));
    let h = rows(&fs::read_to_string(out.join("ymax.csv")).unwrap());
    let mass: f64 = h.iter().map(|r| r[3] * (r[1] - r[0])).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn sample_validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = path(&out);
    for bad in [
        vec!["sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "0", "--seed", "1", "--out", o],
        vec!["sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "5", "--out", o],
        vec!["sample", "--ensemble", "cue", "--n", "10", "--T", "1.5", "--trials", "5", "--seed", "1", "--out", o],
        vec!["sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "5", "--seed", "1", "--observables", "exceed-counts", "--out", o],
        vec!["sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "5", "--seed", "1", "--observables", "nope", "--out", o],
    ] {
        assert_eq!(code(&bad), 2, "{bad:?}");
    }
    assert!(!out.exists());
}

#[test]
fn cue_sampling_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cue");
    ok(&[
        "sample", "--ensemble", "cue", "--n", "8", "--T", "0.5", "--trials", "200", "--seed", "2", "--observables",
        "min-modulus,ymax", "--bins", "0:1:20", "--out", path(&out),
    ]);
    let mm = rows(&fs::read_to_string(out.join("min-modulus.csv")).unwrap());
    assert!(mm.iter().all(|r| r[1] > 0.0 && r[1] < 1.0));
}

fn compare_json(emp: &Path, model: &Path) -> Value {
    let r = json(&ok(&["compare", "--empirical", path(emp), "--model", path(model)]));
    r["data"]["report"].clone()
}

#[test]
fn compare_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = d.join("run");
    ok(&[
        "sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "50000", "--seed", "11",
        "--observables", "imag-hist", "--bins", "0:2:80", "--out", path(&run),
    ]);
    let hist = run.join("imag-hist.csv");
    let exact = d.join("exact.csv");
    ok(&[
        "density", "--model", "finite-imag", "--n", "10", "--gamma", "2", "--grid", "1e-9:1.999999999:4001",
        "--out", path(&exact),
    ]);
    let r = compare_json(&hist, &exact);
    let (sup, dkw) = (r["sup_cdf"].as_f64().unwrap(), r["dkw_99"].as_f64().unwrap());
    assert!(sup <= 1.5 * dkw, "sup {sup} vs DKW {dkw}");

    let same = compare_json(&hist, &hist);
    let z = same["z_scores"].as_array().unwrap();
    assert!(z.iter().filter_map(Value::as_f64).all(|z| z.abs() < 1e-9));
    assert!(same["sup_cdf"].as_f64().unwrap() < 1e-12);

    let wrong = d.join("wrong.csv");
    ok(&[
        "density", "--model", "finite-imag", "--n", "10", "--gamma", "2.5", "--grid", "1e-9:2.499999999:4001",
        "--out", path(&wrong),
    ]);
    assert!(compare_json(&hist, &wrong)["sup_cdf"].as_f64().unwrap() > 0.1);

    let out = d.join("report.json");
    ok(&["compare", "--empirical", path(&hist), "--model", path(&exact), "--out", path(&out)]);
    let v = json(&fs::read_to_string(&out).unwrap());
    assert_eq!(v["manifest"]["command"], "compare");
    assert_eq!(v["data"]["model_manifest"]["parameters"]["model"], "finite-imag");
}

#[test]
fn compare_rejects_incompatible_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = d.join("run");
    ok(&[
        "sample", "--ensemble", "gue", "--n", "10", "--gamma", "2", "--trials", "200", "--seed", "3",
        "--observables", "imag-hist,min-modulus", "--bins", "0:2:20", "--out", path(&run),
    ]);
    let hist = run.join("imag-hist.csv");
    let far = d.join("far.csv");
    ok(&["density", "--model", "limit-imag", "--gamma", "2", "--grid", "5:9:50", "--out", path(&far)]);
    let count = d.join("count.csv");
    ok(&["density", "--model", "critical-imag", "--alpha", "0", "--grid", "0.1:1:5", "--out", path(&count)]);
    let plain = d.join("plain.csv");
    fs::write(&plain, "y,value\n0.1,1\n0.2,1\n").unwrap();

    let c = |e: &Path, m: &Path| code(&["compare", "--empirical", path(e), "--model", path(m)]);
    assert_eq!(c(&hist, &far), 2);
    assert_eq!(c(&hist, &count), 2);
    assert_eq!(c(&hist, &plain), 2);
    assert_eq!(c(&run.join("min-modulus.csv"), &far), 2);
    assert_eq!(c(&far, &far), 2);
    assert_eq!(c(&d.join("missing.csv"), &far), 2);
}

#[test]
fn emitted_csv_values_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    ok(&["density", "--model", "limit-imag", "--gamma", "1.5", "--grid", "0.01:3:300", "--out", path(&m)]);
    let text = fs::read_to_string(&m).unwrap();
    assert!(text.contains(&format!("# output_path={}", path(&m))));
    for r in rows(&text) {
        let exact = outlier_lab::limit::limit_imag_density(r[0], 1.5).unwrap();
        assert_eq!(r[1], exact);
    }
}
