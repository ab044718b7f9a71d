//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, and format switches.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ctrw-lab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    std::fs::write(dir.join(name), contents).unwrap();
}

const CONFIG: &str = "
# smoke experiment
jump_dist = gaussian
wait_dist = exponential
n = 10, 40
horizon = 1.0
replicates = 120
eval_times = 0.5, 1.0
seed = 11
limit_a = brownian
limit_d = linear-drift
delta = 0.05
";

const PLATEAU_PATH: &str = r#"{"dim": 1, "horizon": 3.0, "knots": [
  [0.0, [0.0], "linear"],
  [1.0, [1.0], "hold"],
  [2.0, [2.0], "linear"],
  [3.0, [3.0], "hold"]
]}"#;

#[test]
fn simulate_writes_paths_and_marginals() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "exp.conf", CONFIG);
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "exp.conf", "--n", "10", "--replicates", "4", "--out", "runs"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let jsonl = std::fs::read_to_string(dir.path().join("runs/paths.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 4);
    for line in jsonl.lines() {
        ctrw_lab::path::CadlagPath::from_json_str(line).unwrap();
    }
    let csv = std::fs::read_to_string(dir.path().join("runs/marginals.csv")).unwrap();
    assert!(csv.starts_with("replicate,t0.5_c0,t1_c0\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn simulate_is_reproducible_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "exp.conf", CONFIG);
    let args = ["simulate", "--config", "exp.conf", "--replicates", "3", "--format", "json"];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    // A different seed changes the draw.
    let mut args_seeded = args.to_vec();
    args_seeded.extend(["--seed", "12"]);
    let c = run_in(dir.path(), &args_seeded);
    assert!(c.status.success());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn stairfill_round_trips_path_json() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "plateau.json", PLATEAU_PATH);
    let out = run_in(dir.path(), &["stairfill", "plateau.json"]);
    assert!(out.status.success());
    let filled =
        ctrw_lab::path::CadlagPath::from_json_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(filled.discontinuities().is_empty());
    assert_eq!(filled.eval(1.5).unwrap(), vec![1.5]);
}

#[test]
fn distance_reports_all_three_metrics() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "plateau.json", PLATEAU_PATH);
    let fill = run_in(dir.path(), &["stairfill", "plateau.json"]);
    write(dir.path(), "filled.json", &String::from_utf8_lossy(&fill.stdout));

    let out = run_in(
        dir.path(),
        &["distance", "plateau.json", "filled.json", "--t-max", "2.5"],
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("metric,lower,upper\n"));
    assert!(text.contains("uniform,1,1"));
    assert!(text.contains("j1,0.5,0.5"));
    assert!(text.contains("m1,0.5,0.5"));

    let out = run_in(
        dir.path(),
        &["distance", "plateau.json", "filled.json", "--t-max", "2.5", "--format", "json"],
    );
    let doc: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(doc["uniform"], 1.0);
    assert_eq!(doc["m1"]["lower"], 0.5);
}

#[test]
fn certify_exit_code_tracks_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "target.json", PLATEAU_PATH);
    let mut names = Vec::new();
    for n in [4usize, 8, 16, 32] {
        let inv = 1.0 / n as f64;
        let member = format!(
            r#"{{"dim": 1, "horizon": 3.0, "knots": [
  [0.0, [0.0], "linear"],
  [1.0, [1.0], "hold"],
  [{}, [{}], "hold"],
  [2.0, [2.0], "linear"],
  [3.0, [3.0], "hold"]
]}}"#,
            2.0 - inv,
            1.0 + inv
        );
        let name = format!("member{n}.json");
        write(dir.path(), &name, &member);
        names.push(name);
    }

    let mut args = vec!["certify", "target.json"];
    args.extend(names.iter().map(String::as_str));
    args.extend(["--epsilon", "0.2", "--out", "cert"]);
    let out = run_in(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("cert/certificate.json").exists());

    // Against a constant path the same members cannot converge: the jump at
    // t = 2 keeps every subset 1 away.
    write(
        dir.path(),
        "far.json",
        r#"{"dim": 1, "horizon": 3.0, "knots": [[0.0, [0.0], "hold"]]}"#,
    );
    let mut args = vec!["certify", "far.json"];
    args.extend(names.iter().map(String::as_str));
    args.extend(["--epsilon", "0.2"]);
    let out = run_in(dir.path(), &args);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn converge_runs_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "exp.conf", CONFIG);
    let out = run_in(
        dir.path(),
        &["converge", "--config", "exp.conf", "--out", "conv"],
    );
    // Trend wobble is legitimate at this replicate count; only usage errors
    // may exit 2.
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let csv = std::fs::read_to_string(dir.path().join("conv/ks.csv")).unwrap();
    assert!(csv.starts_with("n,t,ks,critical_1pct,below_critical\n"));
    assert_eq!(csv.lines().count(), 5);
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("conv/report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["cells"].as_array().unwrap().len(), 4);
    assert_eq!(report["config"]["seed"], 11);
}

#[test]
fn example1_passes_at_reduced_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["example1", "--n-max", "32", "--ladder", "2,8,32", "--threshold", "0.1", "--out", "ex"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("counterexample inequalities: pass"));
    for name in [
        "example1_rows.csv",
        "example1_certificates.csv",
        "example1.json",
        "sequences.csv",
        "sequences.json",
    ] {
        assert!(dir.path().join("ex").join(name).exists(), "missing {name}");
    }
}

#[test]
fn proptest_reports_each_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["proptest", "--cases", "40", "--seed", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("suite,cases,checks,failures\n"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["distance", "nope.json", "alsono.json"]);
    assert_eq!(out.status.code(), Some(2));

    write(dir.path(), "bad.conf", "unknown_key = 1\n");
    let out = run_in(dir.path(), &["converge", "--config", "bad.conf"]);
    assert_eq!(out.status.code(), Some(2));

    let out = bin().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
