//! End-to-end tests of the `gtls` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn gtls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtls")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn moments_of_plancherel() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "planch1.json", r#"{"mode":"limit","preset":"planch","gamma":"1"}"#);
    let o = gtls(&["moments", "--params", s(&f), "--order", "8", "--route", "inverse"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["m"][0], "1/2");
    assert_eq!(v["route"], "inverse");
    assert_eq!(v["m_tilde"].as_array().unwrap().len(), 8);
    for route in ["nc", "lagrange"] {
        let other = json(&gtls(&["moments", "--params", s(&f), "--order", "8", "--route", route]));
        assert_eq!(other["m"], v["m"], "{route}");
    }
}

#[test]
fn trivial_moments() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t.json", r#"{"mode":"limit"}"#);
    let v = json(&gtls(&["moments", "--params", s(&f), "--order", "4"]));
    assert_eq!(v["m"], serde_json::json!(["-1/2", "1/3", "-1/4", "1/5"]));
    assert_eq!(v["m_tilde"], serde_json::json!(["0", "0", "0", "0"]));
}

#[test]
fn moment_file_roundtrip() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "p.json", r#"{"mode":"limit","g_plus":"2/3","A_plus":[{"x":"1","w":"1/2"}]}"#);
    let first = gtls(&["moments", "--params", s(&f), "--order", "6"]);
    let mf = write(&d, "m.json", &stdout(&first));
    let again = gtls(&["moments", "--params", s(&mf), "--order", "6"]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again), stdout(&first));
}

#[test]
fn density_matches_closed_form() {
    let o = gtls(&["density", "--preset", "planch", "--gamma", "1", "--grid", "2000", "--compare-preset", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("x,p,p_closed\n"));
    assert!(rows(&text).len() >= 2000);
}

#[test]
fn impossible_tolerance_is_a_numerical_failure() {
    let o = gtls(&["density", "--preset", "planch", "--gamma", "1", "--grid", "200", "--compare-preset", "--tol", "1e-30"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn plancherel_regimes() {
    for (g, plateau) in [("0.3", true), ("1", false), ("2", false)] {
        let d = TempDir::new().unwrap();
        let side = d.path().join("side.json");
        let o = gtls(&["density", "--preset", "planch", "--gamma", g, "--grid", "1000", "--sidecar", s(&side)]);
        assert_eq!(code(&o), 0);
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&side).unwrap()).unwrap();
        assert_eq!(!meta["flat_regions"].as_array().unwrap().is_empty(), plateau, "gamma={g}");
    }
}

#[test]
fn trivial_shape_is_a_tent() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t.json", r#"{"mode":"limit"}"#);
    let o = gtls(&["shape", "--params", s(&f), "--grid", "301", "--xmin", "-2", "--xmax", "1"]);
    assert_eq!(code(&o), 0);
    for r in rows(&stdout(&o)) {
        let (x, w) = (r[0], r[1]);
        let tent = if x >= 0.0 { x } else if x >= -1.0 { -x } else { x + 2.0 };
        assert!((w - tent).abs() < 1e-4, "w({x}) = {w}");
    }
}

#[test]
fn preset_curve() {
    let o = gtls(&["preset", "multi_alpha", "--alpha", "1", "--a", "0.25", "--grid", "11"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 11);
    assert_eq!(gtls(&["preset", "continuous"]).status.code(), Some(2));
}

#[test]
fn oracle_summary_and_table() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "planch1.json", r#"{"mode":"limit","preset":"planch","gamma":"1"}"#);
    let table = d.path().join("table.csv");
    let o = gtls(&["oracle", "--params", s(&f), "--N", "4", "--cutoff", "20", "--delta", "1e-3", "--table", s(&table)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["captured_mass"].as_f64().unwrap() >= 0.999);
    assert_eq!(v["N"], 4);
    assert_eq!(v["moments"].as_array().unwrap().len(), 3);
    let t = std::fs::read_to_string(&table).unwrap();
    assert!(t.starts_with("lambda,prob\n0|0|0|0,"), "{}", &t[..40]);
}

#[test]
fn oracle_at_desk_scale() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "planch1.json", r#"{"mode":"limit","preset":"planch","gamma":"1"}"#);
    let o = gtls(&["oracle", "--params", s(&f), "--N", "20", "--cutoff", "70", "--delta", "1e-3"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["captured_mass"].as_f64().unwrap() >= 0.999);
    // lambda_1 <= 60 sits at the right edge of the N = 20 shape
    let o = gtls(&["oracle", "--params", s(&f), "--N", "20", "--cutoff", "60", "--delta", "1e-3"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("increase cutoff"));
}

#[test]
fn convolution_of_plancherel_measures() {
    let d = TempDir::new().unwrap();
    let p1 = write(&d, "planch1.json", r#"{"mode":"limit","preset":"planch","gamma":"1"}"#);
    let p2 = write(&d, "planch2.json", r#"{"mode":"limit","preset":"planch","gamma":"2"}"#);
    let c = json(&gtls(&["convolve", s(&p1), s(&p1), "--order", "10"]));
    let direct = json(&gtls(&["moments", "--params", s(&p2), "--order", "10"]));
    assert_eq!(c["m"], direct["m"]);
    assert_eq!(c["t"], direct["t"]);
}

#[test]
fn velocity_and_height() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "planch1.json", r#"{"mode":"limit","preset":"planch","gamma":"1"}"#);
    let o = gtls(&["velocity", "--kind", "gamma_plus", "--x", "1", "--y", "1", "--params", s(&f)]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert!(stdout(&o).starts_with("x,y,value\n"));
    // w^2 - 2w + 2 = 0 at (1, 1) gives z_+ = 1/(1 - i), so -(1/pi) Im(1/z_+) = 1/pi
    assert!((r[0][2] - 1.0 / std::f64::consts::PI).abs() < 1e-9, "{}", r[0][2]);
    let o = gtls(&["velocity", "--kind", "gamma_plus", "--x", "-2:0:3", "--params", s(&f)]);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",nan"));
    let o = gtls(&["height", "--params", s(&f), "--x", "-1.5:4:5", "--y", "0.5:1:2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&stdout(&o)).len(), 10);
}

#[test]
fn input_errors_exit_with_two() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.json", "{");
    let wrong = write(&d, "wrong.json", r#"{"mode":"limit","g_plus":"-1"}"#);
    let finite = write(&d, "f.json", r#"{"mode":"finiteN","gamma_plus":"2"}"#);
    let good = write(&d, "good.json", r#"{"mode":"limit","g_plus":"1"}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["moments", "--params", s(&bad)],
        vec!["moments", "--params", s(&wrong)],
        vec!["moments", "--params", "/nonexistent/file.json"],
        vec!["moments", "--params", s(&finite)],
        vec!["moments", "--params", s(&good), "--order", "30"],
        vec!["moments", "--params", s(&good), "--route", "sideways"],
        vec!["density", "--preset", "nope"],
        vec!["density", "--preset", "planch"],
        vec!["density", "--params", s(&good), "--grid", "1"],
        vec!["velocity", "--kind", "delta", "--x", "1", "--params", s(&good)],
        vec!["velocity", "--kind", "beta_plus", "--value", "2", "--x", "1", "--params", s(&good)],
        vec!["height", "--params", s(&good), "--x", "1:2"],
        vec!["oracle", "--params", s(&finite), "--N", "3", "--table", "t.csv"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(code(&gtls(&args)), 2, "{args:?}");
    }
}

#[test]
fn thread_cap() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_gtls"))
            .env("GTLS_THREADS", v)
            .args(["density", "--preset", "planch", "--gamma", "1", "--grid", "300"])
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, run("3").stdout);
}

#[test]
fn identical_invocations_give_identical_files() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "p.json", r#"{"mode":"limit","A_plus":[{"x":"1","w":"1"}]}"#);
    let mut outs = Vec::new();
    for i in 0..2 {
        let out = d.path().join(format!("out{i}.csv"));
        let o = gtls(&["density", "--params", s(&f), "--grid", "500", "-o", s(&out)]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
        outs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}
