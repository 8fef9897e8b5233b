//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always show; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use msolv_cli::{emit_report, run_experiment, ExperimentConfig, ExperimentReport};
use serde_json::{json, Value};

fn run(name: &str) -> Vec<ExperimentReport> {
    run_experiment(name, &ExperimentConfig::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn one(name: &str) -> ExperimentReport {
    run(name).pop().expect("one report")
}

fn failed_verdicts(r: &ExperimentReport) -> Vec<String> {
    r.verdicts.iter().filter(|(_, ok)| !ok).map(|(n, _)| format!("{}:{n}", r.name)).collect()
}

/// Checks that every listed experiment passes; `extra` adds frozen-value checks.
fn experiments(names: &[&str], extra: impl Fn(&[ExperimentReport]) -> Vec<String>) -> Vec<String> {
    let reports: Vec<ExperimentReport> = names.iter().map(|n| one(n)).collect();
    let mut problems: Vec<String> = reports.iter().flat_map(failed_verdicts).collect();
    problems.extend(extra(&reports));
    problems
}

fn expect(problems: &mut Vec<String>, what: &str, got: &Value, want: Value) {
    if *got != want {
        problems.push(format!("{what}: got {got}, expected {want}"));
    }
}

fn c1() -> Vec<String> {
    experiments(&["counterexample"], |r| {
        let d = &r[0].data;
        let mut p = Vec::new();
        expect(&mut p, "|G|", &d["group"]["order"], json!(72));
        expect(&mut p, "|Z(G)|", &d["group"]["center_order"], json!(1));
        expect(&mut p, "|G/G^[2]|", &d["quotient"]["order"], json!(8));
        expect(&mut p, "|Z(G/G^[2])|", &d["quotient"]["center_order"], json!(2));
        p
    })
}

fn c2() -> Vec<String> {
    experiments(&["reduction-lemma"], |r| {
        let d = &r[0].data;
        let mut p = Vec::new();
        expect(&mut p, "random instances", &d["random"]["instances"], json!(1000));
        expect(&mut p, "exhaustive failures", &d["exhaustive"]["failures"], json!(0));
        p
    })
}

fn c3() -> Vec<String> {
    experiments(&["gtilde"], |r| {
        let mut p = Vec::new();
        for inst in r[0].data["instances"].as_array().expect("instances") {
            // ρ(x) has order 3, so the diagonal of ⟨ρ(x)⟩ has three pairs
            let pairs = inst["feasible_pairs"].as_array().expect("pairs");
            expect(&mut p, "feasible pair count", &json!(pairs.len()), json!(3));
            expect(&mut p, "pairs checked", &inst["pairs_checked"], json!(18));
        }
        p
    })
}

fn c4() -> Vec<String> {
    experiments(&["fox"], |r| {
        let mut p = Vec::new();
        // 1457 reduced words of length ≤ 6 in rank 2, in four contexts
        expect(&mut p, "exhaustive checks", &r[0].data["exhaustive_checks"], json!(4 * 1457));
        expect(&mut p, "random checks", &r[0].data["random_checks"], json!(1000));
        p
    })
}

fn c5() -> Vec<String> {
    experiments(&["crowell"], |_| Vec::new())
}

fn c6() -> Vec<String> {
    experiments(&["magnus"], |r| {
        let mut p = Vec::new();
        expect(&mut p, "random pairs", &r[0].data["random_pairs"], json!(500));
        p
    })
}

fn c7() -> Vec<String> {
    experiments(&["kernel-projection"], |r| {
        let mut p = Vec::new();
        if r[0].data["checks"].as_u64().unwrap_or(0) == 0 {
            p.push("no kernel-projection checks ran".into());
        }
        p
    })
}

fn c8() -> Vec<String> {
    experiments(&["transfer"], |_| Vec::new())
}

fn c9() -> Vec<String> {
    experiments(&["quotient-iso"], |_| Vec::new())
}

fn c10() -> Vec<String> {
    experiments(&["solv-model"], |r| {
        let mut p = Vec::new();
        let models = r[0].data["models"].as_array().expect("models");
        let find = |e: u64, m: u64| models.iter().find(|x| x["e"] == e && x["m"] == m).expect("model present");
        let (w222, w232, w223) = (find(2, 2), find(3, 2), find(2, 3));
        expect(&mut p, "|W(2,2,2)|", &w222["order"], json!(128));
        expect(&mut p, "|W(2,3,2)|", &w232["order"], json!(531441));
        expect(&mut p, "|W(2,2,3)|", &w223["order"], json!("87112285931760246646623899502532662132736"));
        for (w, kernel, cent) in [(w222, 8, 16), (w232, 81, 243), (w223, 8589934592u64, 34359738368u64)] {
            for c in w["centralizers"].as_array().expect("rows") {
                expect(&mut p, "|K ∩ C|", &c["kernel_ring_route"], json!(kernel));
                expect(&mut p, "|C|", &c["centralizer_order"], json!(cent));
            }
        }
        p
    })
}

fn c11() -> Vec<String> {
    experiments(&["derived-series", "msolv-quotient", "centralizer", "centerfree-scan"], |r| {
        let mut p = Vec::new();
        let groups = r[0].data["groups"].as_array().expect("groups");
        if !groups.iter().any(|g| g["order"] == 128) {
            p.push("corpus lacks a group of order 128".into());
        }
        p
    })
}

fn c12() -> Vec<String> {
    let with_jobs = |jobs| {
        let cfg = ExperimentConfig { jobs: Some(jobs), seed: Some(7), ..Default::default() };
        emit_report(&run_experiment("suite", &cfg).expect("suite runs"))
    };
    let a = with_jobs(1);
    let b = with_jobs(4);
    let c = with_jobs(4);
    let mut p = Vec::new();
    if a != b {
        p.push("reports differ between 1 and 4 workers".into());
    }
    if b != c {
        p.push("reports differ between identical runs".into());
    }
    p
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Vec<String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "counterexample reproduction", Some(Duration::from_secs(1)), c1),
        (2, "reduction lemma sweep", Some(Duration::from_secs(10)), c2),
        (3, "G-tilde feasible pairs", Some(Duration::from_secs(30)), c3),
        (4, "Fox expansion identity", Some(Duration::from_secs(60)), c4),
        (5, "finite Crowell exactness", Some(Duration::from_secs(60)), c5),
        (6, "Magnus/Fox consistency", Some(Duration::from_secs(30)), c6),
        (7, "kernel projection", Some(Duration::from_secs(60)), c7),
        (8, "transfer identity", Some(Duration::from_secs(60)), c8),
        (9, "quotient isomorphism lemma", Some(Duration::from_secs(30)), c9),
        (10, "solvable model oracle equivalence", Some(Duration::from_secs(300)), c10),
        (11, "engine cross-check", Some(Duration::from_secs(300)), c11),
        (12, "determinism", None, c12),
    ];
    let mut failures = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let mut problems = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                problems.push(format!("took {:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()));
            }
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        let bound = limit.map_or_else(|| "no limit".to_string(), |l| format!("limit {}s", l.as_secs()));
        println!("criterion {id:>2} {title:<36} {status}  {:>7.2}s ({bound})", elapsed.as_secs_f64());
        for p in &problems {
            println!("    {p}");
        }
        failures += !problems.is_empty() as u32;
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
