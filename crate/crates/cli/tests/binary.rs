use std::process::{Command, Output};

fn msolv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msolv")).args(args).output().expect("binary runs")
}

#[test]
fn counterexample_exits_zero() {
    let out = msolv(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""group":{"center_order":1,"#));
    assert!(text.contains(r#""quotient":{"center_order":2,"#));
}

#[test]
fn gtilde_example() {
    let out = msolv(&["gtilde", "--group", "perm 3 : (0 1 2),(0 1)", "--x", "(0 1 2)", "--n", "1", "--l", "3", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let inst = &v["experiments"][0]["data"]["instances"][0];
    assert_eq!(inst["feasible_pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_dsl_exits_two() {
    let out = msolv(&["derived-series", "--group", "perm 3 : (0 1 2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(msolv(&["no-such-experiment"]).status.code(), Some(2));
    assert_eq!(msolv(&["reduction-lemma", "--l", "4"]).status.code(), Some(2));
    assert_eq!(msolv(&["fox", "--primes", "2,6"]).status.code(), Some(2));
    assert_eq!(msolv(&["solv-model", "--e", "6"]).status.code(), Some(2));
    assert_eq!(msolv(&["reduction-lemma", "--n", "0"]).status.code(), Some(2));
    assert_eq!(msolv(&["kernel-projection", "--modulus", "1"]).status.code(), Some(2));
    assert_eq!(msolv(&["surface", "--genus", "9"]).status.code(), Some(2));
}

#[test]
fn computation_failure_exits_one_with_witness() {
    let out = msolv(&["solv-model", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["experiments"][0];
    assert_eq!(r["passed"], false);
    assert_eq!(r["witnesses"][0]["verdict"], "completed");
}

#[test]
fn out_file_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "group = \"builtin S4\"\nm = 2\nseed = 3\n").unwrap();
    let out = msolv(&["msolv-quotient", "--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let bytes = std::fs::read(&path).unwrap();
    let stdout = msolv(&["msolv-quotient", "--group", "builtin S4", "--m", "2", "--seed", "3"]).stdout;
    assert_eq!(&stdout[..stdout.len() - 1], &bytes[..]);
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["experiments"][0]["data"]["quotients"][0]["quotient_order"], 6);
    assert_eq!(v["experiments"][0]["config"]["group"], "builtin S4");
}

#[test]
fn list_names_every_experiment() {
    let out = String::from_utf8(msolv(&["list"]).stdout).unwrap();
    for name in [
        "counterexample", "derived-series", "msolv-quotient", "centralizer", "fox", "magnus", "crowell", "gtilde",
        "reduction-lemma", "kernel-projection", "transfer", "quotient-iso", "solv-model", "centerfree-scan", "surface",
    ] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
