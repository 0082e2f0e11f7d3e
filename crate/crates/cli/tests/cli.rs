use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condorcet")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn analyze_homogeneous_manipulable() {
    let v = json(&["analyze", "--lambda", "0", "--q-low", "0.7", "--q-high", "0.7"]);
    let r = &v["result"];
    assert_eq!(r["classification"], "Manipulable");
    let w = &r["witnesses"][0];
    assert!((f(&w["signal"]["alpha"]) - 0.7).abs() < 1e-12);
    assert!((f(&w["signal"]["beta"]) - 0.3).abs() < 1e-12);
    assert!(f(&w["bias"]).abs() < 1e-12);
    assert!((f(&w["conditionals"]["a_given_theta_a"]) - 0.7).abs() < 1e-12);
    assert!((f(&r["thresholds"]["q_bar"]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert_eq!(v["inputs"]["profile"]["q_high"], 0.7);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn analyze_not_manipulable_lists_candidates_on_request() {
    let v = json(&["analyze", "--lambda", "0.3", "--q-low", "0.6", "--q-high", "0.7", "--full"]);
    assert_eq!(v["result"]["classification"], "NotManipulable");
    let cands = v["result"]["candidates"].as_array().unwrap();
    assert_eq!(cands.len(), 6);
    assert!(cands.iter().all(|c| f(&c["b_share_theta_b"]) > 0.5));
}

#[test]
fn domain_errors_exit_two() {
    let out = run(&["analyze", "--lambda", "0", "--q-low", "0.45"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("q_low = 0.45 below 0.5"));

    let out = run(&["oracle", "--q", "0.7", "--step", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("step"));

    let out = run(&["analyze", "--q", "0.7", "--csv"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["simulate", "--q", "0.7", "--signal", "alpha=0.4,beta=0.3", "--state", "B"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_replicates_the_certain_b_scheme() {
    let v = json(&[
        "simulate", "--q", "0.55", "--signal-cond", "1.0", "0.7", "--state", "B", "--n", "10001", "--trials", "500",
        "--seed", "7",
    ]);
    let r = &v["result"];
    assert!(f(&r["a_win_frequency"]) >= 0.99);
    assert!((f(&r["exact_a_share"]) - 0.7).abs() < 1e-12);
    assert_eq!(v["inputs"]["seed"], 7);
    assert_eq!(v["inputs"]["tie"], "favor-a");
}

#[test]
fn signal_forms_agree() {
    let base = ["simulate", "--q", "0.7", "--state", "B", "--n", "101", "--trials", "20", "--seed", "1"];
    let a = json(&[&base[..], &["--signal", "alpha=0.7,beta=0.3"]].concat());
    let b = json(&[&base[..], &["--signal-cond", "0.7", "0.3"]].concat());
    let (a, b) = (&a["result"], &b["result"]);
    assert_eq!(a["mean_a_share"], b["mean_a_share"]);
    assert_eq!(a["a_win_frequency"], b["a_win_frequency"]);
    assert!((f(&a["exact_a_share"]) - f(&b["exact_a_share"])).abs() < 1e-12);
}

#[test]
fn b_favourable_ties_break_the_symmetric_witness() {
    let base = ["simulate", "--q", "0.7", "--signal", "alpha=0.7,beta=0.3", "--state", "B", "--n", "1001", "--trials", "50"];
    let a = json(&base);
    let b = json(&[&base[..], &["--tie", "favor-b"]].concat());
    assert!((f(&a["result"]["exact_a_share"]) - 0.51).abs() < 1e-12);
    // Both mixed cells sit at posterior 1/2 and now vote B.
    assert!((f(&b["result"]["exact_a_share"]) - 0.09).abs() < 1e-12);
    assert_eq!(f(&b["result"]["a_win_frequency"]), 0.0);
}

#[test]
fn even_electorate_warns() {
    let out = run(&["simulate", "--q", "0.7", "--state", "A", "--n", "10", "--trials", "2"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("even"));
}

#[test]
fn sweep_below_two_thirds_is_all_manipulable() {
    let out = run(&["sweep", "--q-high", "0.65", "--q-low", "0.5:0.65:0.01"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 16 * 21);
    assert!(text.lines().skip(1).all(|l| !l.contains("NotManipulable")));
}

#[test]
fn single_cell_sweep_matches_analyze() {
    let out = run(&["sweep", "--q-high", "0.7", "--q-low", "0.69", "--lambda", "0.4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v = json(&["analyze", "--lambda", "0.4", "--q-low", "0.69", "--q-high", "0.7"]);
    assert_eq!(row[3], v["result"]["classification"]);
    assert_eq!(row[4], "1");
    assert_eq!(row[7], v["result"]["best_candidate"]);
    let bias = f(&v["result"]["witnesses"][0]["bias"]);
    assert_eq!(row[5].parse::<f64>().unwrap(), bias);
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("s{i}.csv"))).collect();
    for p in &paths {
        let out = run(&["sweep", "--q-high", "0.7", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 21 * 21);
}

#[test]
fn sweep_json() {
    let v = json(&["sweep", "--q-high", "0.7", "--q-low", "0.6", "--lambda", "0:0.1:0.05", "--json"]);
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
    assert_eq!(v["inputs"]["q_high"], 0.7);
}

#[test]
fn oracle_examples() {
    let v = json(&["oracle", "--lambda", "0", "--q", "0.72", "--step", "0.005"]);
    assert_eq!(v["result"]["grid"]["optimal_count"], 0);
    assert_eq!(v["result"]["lemma1"]["holds"], true);

    let v = json(&["oracle", "--lambda", "0.4", "--q-low", "0.69", "--q-high", "0.7", "--step", "0.002"]);
    let range = v["result"]["grid"]["bias_range"].as_array().unwrap();
    assert!(f(&range[0]) < 0.0 && f(&range[1]) < 0.0);
    assert_eq!(v["result"]["classification"], "Manipulable");
}

#[test]
fn oracle_with_b_ties_uses_perturbed_candidates() {
    let v = json(&["oracle", "--lambda", "0.04", "--q-low", "0.6", "--q-high", "0.7", "--tie", "favor-b", "--full"]);
    assert_eq!(v["result"]["grid"]["manipulable"], true);
    assert!(!v["result"]["grid"]["optimal_set"].as_array().unwrap().is_empty());
}

#[test]
fn extension_examples() {
    let v = json(&["extensions", "targeted", "--lambda", "0.5", "--q-low", "0.55", "--q-high", "0.75"]);
    assert_eq!(v["result"]["classification"], "Manipulable");
    assert!((f(&v["result"]["lhs"]) - 0.6279).abs() < 1e-4);

    let v = json(&["extensions", "strongly-targeted", "--q", "0.75"]);
    assert_eq!(v["result"]["classification"], "Manipulable");

    let v = json(&["extensions", "public", "--lambda", "0", "--q", "0.7"]);
    assert_eq!(v["result"]["preferred_medium"], "private");
    let v = json(&["extensions", "public", "--q", "0.72"]);
    assert_eq!(v["result"]["preferred_medium"], "public");
}

#[test]
fn continuous_tables() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("uniform.txt");
    std::fs::write(&good, "breakpoint value\n0.5 2\n1.0 0\n").unwrap();
    let v = json(&["extensions", "continuous", "--file", good.to_str().unwrap()]);
    assert_eq!(v["result"]["basis"], "numeric");
    assert_eq!(v["result"]["analytic"], "Undetermined");

    let v = json(&["extensions", "targeted", "--file", good.to_str().unwrap()]);
    assert!((f(&v["result"]["lhs"]) - 0.442446).abs() < 1e-6);

    let high = dir.path().join("high.txt");
    std::fs::write(&high, "breakpoint value\n0.75 4\n1.0 0\n").unwrap();
    let v = json(&["extensions", "continuous", "--file", high.to_str().unwrap()]);
    assert_eq!(v["result"]["classification"], "NotManipulable");
    assert_eq!(v["result"]["basis"], "analytic");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "breakpoint value\n0.5 1\n1.0 0\n").unwrap();
    let out = run(&["extensions", "continuous", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("integrates to 0.5"));
}
