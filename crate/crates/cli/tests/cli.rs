use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn smoothlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothlab"))
        .args(args)
        .output()
        .expect("spawn smoothlab")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RUN: &[&str] = &[
    "run", "--experiment", "general-lower", "--algorithm", "hoare-find", "--rule", "classic",
    "--target", "max", "--model", "additive", "--d", "1.0", "--n", "4096", "--trials", "200",
    "--seed", "42",
];

#[test]
fn run_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let status = smoothlab(&[RUN, &["--out", path_str(&out)]].concat());
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 201);
    assert_eq!(lines[0], smoothlab::experiments::CSV_HEADER);
    assert!(lines[1].starts_with("general-lower,hoare-find,classic,max,additive,1.0,4096,0,42,"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["run", "--experiment", "uniform-random", "--algorithm", "quicksort", "--rule", "m3",
        "--p", "0.3", "--n-grid", "64,128", "--trials", "30", "--seed", "7"];
    assert!(smoothlab(&[&args[..], &["--jobs", "1", "--out", path_str(&a)]].concat()).status.success());
    assert!(smoothlab(&[&args[..], &["--jobs", "3", "--out", path_str(&b)]].concat()).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn json_has_meta_and_rows() {
    let out = smoothlab(&["run", "--experiment", "sorted", "--algorithm", "scan-maxima",
        "--n", "16", "--trials", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["master_seed"], smoothlab::verify::DEFAULT_SEED);
    assert_eq!(v["meta"]["config_hash"].as_str().unwrap().len(), 16);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["pivots"], 16);
}

#[test]
fn incompatible_pairing_exits_2() {
    let out = smoothlab(&["run", "--experiment", "pp-lower", "--model", "additive", "--d", "1",
        "--n", "101", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partial"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["run", "--experiment", "sorted", "--n", "8", "--frobnicate"][..],
        &["run", "--experiment", "sorted"],
        &["run", "--experiment", "sorted", "--n", "8", "--rule", "median"],
        &["run", "--experiment", "sorted", "--n-grid", "8,4"],
        &["run", "--experiment", "sorted", "--n", "8", "--model", "partial"],
        &["run", "--experiment", "sorted", "--n", "8", "--d-law", "2"],
        &["run", "--experiment", "sorted", "--n", "8", "--target", "k=9"],
        &["verify", "--suite", "everything"],
    ] {
        let out = smoothlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = smoothlab(&["run", "--experiment", "sorted", "--n", "8", "--frobnicate"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--frobnicate"));
}

#[test]
fn verify_deterministic_passes() {
    let out = smoothlab(&["verify", "--suite", "deterministic"]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{table}");
    for id in ["A1", "A2", "A3", "A11", "A12"] {
        assert!(table.lines().any(|l| l.starts_with("PASS") && l.contains(&format!(" {id} "))), "{table}");
    }
    assert!(!table.contains("FAIL"));
}

#[test]
fn sweep_runs_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    fs::write(
        &config,
        r#"
[[experiment]]
experiment = "general-lower"
algorithm = "hoare-find"
rule = "m3"
d = 1.0
n-grid = "32,64"
trials = 4

[[experiment]]
experiment = "pp-lower"
algorithm = "quicksort"
model = "partial"
p = 0.5
n = 33
trials = 3
seed = 9
"#,
    )
    .unwrap();
    let out = smoothlab(&["sweep", path_str(&config), "--seed", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 8 + 3);
    assert!(lines[1].starts_with("general-lower,hoare-find,m3,max,additive,1.0,32,0,5,"));
    assert!(lines[11].starts_with("pp-lower,quicksort,classic,max,partial,0.5,33,2,9,"));
}

#[test]
fn sweep_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "[[experiment]]\nexperiment = \"sorted\"\nn = 8\nsize = 3\n").unwrap();
    let out = smoothlab(&["sweep", path_str(&config)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size"));
}

#[test]
fn fit_recovers_quadratic_growth() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sorted.csv");
    // Classic quicksort on sorted input costs n(n-1)/2 exactly.
    let run = smoothlab(&["run", "--experiment", "sorted", "--algorithm", "quicksort",
        "--n-grid", "64,128,256,512", "--trials", "2", "--out", path_str(&csv)]);
    assert!(run.status.success());
    let out = smoothlab(&["fit", "--input", path_str(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], &["sorted", "quicksort", "classic", "max", "none"]);
    assert_eq!(row[6], "4");
    let slope: f64 = row[7].parse().unwrap();
    assert!((slope - 2.0).abs() < 0.01, "{slope}");
}

#[test]
fn fit_missing_file_exits_2() {
    let out = smoothlab(&["fit", "--input", "/nonexistent/results.csv"]);
    assert_eq!(out.status.code(), Some(2));
}
