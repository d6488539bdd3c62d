//! End-to-end tests of the `cac` binary: exit-status contract, payload
//! shapes, and byte-determinism. Fixtures are written to the target tmpdir.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use cac_core::bounds::BoundResult;
use cac_core::validate::{is_cac, is_scac, Code};

fn cac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cac"))
        .args(args)
        .env_remove("CAC_THREADS")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("tmpdir is writable");
    path
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        !output.stdout.is_empty(),
        "expected a payload, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn strong28() -> PathBuf {
    fixture(
        "strong28.json",
        r#"{"L": 28, "w": 3, "codewords": [[0, 2, 4], [0, 6, 12], [0, 9, 19]]}"#,
    )
}

fn plain12() -> PathBuf {
    fixture(
        "plain12.json",
        r#"{"L": 12, "w": 3, "codewords": [[0, 1, 2], [0, 3, 6], [0, 4, 8]]}"#,
    )
}

#[test]
fn verify_accepts_a_strong_code() {
    let output = cac(&["verify", "--mode", "scac", strong28().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["is_scac"], Value::Bool(true));
    assert_eq!(report["length"], 28);
    assert_eq!(report["violations"], Value::Array(vec![]));
}

#[test]
fn verify_signals_a_failed_property_with_status_1() {
    let file = plain12();
    let output = cac(&["verify", "--mode", "scac", file.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["is_cac"], Value::Bool(true));
    assert_eq!(report["is_scac"], Value::Bool(false));
    assert!(!report["violations"].as_array().unwrap().is_empty());

    // The same file passes the weaker check.
    let output = cac(&["verify", "--mode", "cac", file.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let file = fixture("garbage.json", "{ not json");
    let output = cac(&["verify", file.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());
    assert!(!output.stderr.is_empty());

    let missing = cac(&["verify", "/nonexistent/code.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn double_round_trips_through_verify() {
    let output = cac(&["double", plain12().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let doubled: Code = serde_json::from_slice(&output.stdout).expect("payload is a code");
    assert_eq!(doubled.length(), 24);
    assert!(is_scac(&doubled));

    // Emitted code JSON is accepted back by another subcommand unchanged.
    let path = fixture("doubled24.json", &String::from_utf8(output.stdout).unwrap());
    let output = cac(&["verify", "--mode", "scac", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn double_refuses_a_non_code_with_status_1() {
    // {0,1,2} and {0,2,4} share the difference 2.
    let file = fixture(
        "clash12.json",
        r#"{"L": 12, "w": 3, "codewords": [[0, 1, 2], [0, 2, 4]]}"#,
    );
    let output = cac(&["double", file.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
    assert!(String::from_utf8_lossy(&output.stderr).contains("conflict-avoiding codes only"));
}

#[test]
fn bound_pairs_the_residue_and_legacy_uppers() {
    let output = cac(&["bound", "24"]);
    assert_eq!(output.status.code(), Some(0));
    let results: Vec<BoundResult> = serde_json::from_slice(&output.stdout).unwrap();
    let upper = |id: &str| {
        results
            .iter()
            .find(|r| r.provenance.iter().any(|p| p.id() == id))
            .unwrap_or_else(|| panic!("no {id} row"))
            .hi
    };
    assert_eq!(upper("even-upper"), Some(3));
    assert_eq!(upper("legacy-upper"), Some(4));
    // Every default row is applicable; --all adds the rest.
    assert!(results.iter().all(BoundResult::is_applicable));
    let all = cac(&["bound", "24", "--all"]);
    let all: Vec<BoundResult> = serde_json::from_slice(&all.stdout).unwrap();
    assert!(all.len() > results.len());
    assert!(all.iter().any(|r| !r.is_applicable()));
}

#[test]
fn search_reports_known_optimum_and_gates_counters() {
    let args = ["search", "--mode", "cac", "12"];
    let output = cac(&args);
    assert_eq!(output.status.code(), Some(0));
    let outcome = stdout_json(&output);
    assert_eq!(outcome["optimum"], 3);
    assert_eq!(outcome["proven_optimal"], Value::Bool(true));
    assert!(outcome.get("nodes_explored").is_none());

    // The witness is itself valid code JSON for other subcommands.
    let witness = fixture("witness12.json", &outcome["witness"].to_string());
    let verified = cac(&["verify", "--mode", "cac", witness.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));

    let with_stats = stdout_json(&cac(&["search", "--mode", "cac", "12", "--stats"]));
    assert!(with_stats["nodes_explored"].as_u64().unwrap() > 0);

    // Byte-determinism across runs.
    assert_eq!(output.stdout, cac(&args).stdout);
}

#[test]
fn search_restricted_to_equi_orbits() {
    let outcome = stdout_json(&cac(&["search", "15", "--equi"]));
    assert_eq!(outcome["optimum"], 4);
    let rejected = cac(&["search", "15", "--equi", "--weight", "4"]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn equi_emits_graph_stats_and_a_tight_witness() {
    let output = cac(&["equi", "15"]);
    assert_eq!(output.status.code(), Some(0));
    let payload = stdout_json(&output);
    assert_eq!(payload["L"], 15);
    assert_eq!(payload["cycles"], 3);
    assert_eq!(payload["n_odd"], 1);
    assert_eq!(payload["m_e"], 4);
    assert_eq!(payload["tight"], Value::Bool(true));
    assert_eq!(payload["leave"], Value::Array(vec![]));
    let witness: Code = serde_json::from_value(payload["witness"].clone()).unwrap();
    assert!(is_cac(&witness));

    let even = cac(&["equi", "14"]);
    assert_eq!(even.status.code(), Some(2));
}

#[test]
fn equi_graph_dumps_one_tsv_row_per_cycle() {
    let output = cac(&["equi", "15", "--graph"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(output.stdout).unwrap(),
        "15\t0\t1\t2\t4\t7\n15\t1\t3\t6\n15\t2\t5\n"
    );
}

#[test]
fn simulate_replays_an_offset_assignment() {
    let output = cac(&[
        "simulate",
        plain12().to_str().unwrap(),
        "--offsets",
        "1,1.5,3",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    // The first user loses every packet under these offsets.
    assert_eq!(report["sigma"], serde_json::json!([0, 1, 1]));
    assert_eq!(report["collisions"].as_array().unwrap().len(), 7);
}

#[test]
fn simulate_worst_case_is_exact_and_quiet_by_default() {
    let file = plain12();
    let output = cac(&[
        "simulate",
        file.to_str().unwrap(),
        "--worst-case",
        "--victim",
        "0",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let outcome = stdout_json(&output);
    assert_eq!(outcome["sigma"], 0);
    assert_eq!(outcome["exact"], Value::Bool(true));
    assert!(outcome.get("points_evaluated").is_none());

    // Without --victim, one outcome per user.
    let sweep = stdout_json(&cac(&["simulate", file.to_str().unwrap(), "--worst-case"]));
    assert_eq!(sweep.as_array().unwrap().len(), 3);

    // A strong code keeps at least one packet for every victim.
    let strong = stdout_json(&cac(&["simulate", strong28().to_str().unwrap(), "--worst-case"]));
    for outcome in strong.as_array().unwrap() {
        assert!(outcome["sigma"].as_u64().unwrap() >= 1);
        assert_eq!(outcome["exact"], Value::Bool(true));
    }
}

#[test]
fn simulate_sampling_needs_a_seed_and_is_reproducible() {
    let file = plain12();
    let unseeded = cac(&[
        "simulate",
        file.to_str().unwrap(),
        "--worst-case",
        "--samples",
        "100",
    ]);
    assert_eq!(unseeded.status.code(), Some(2));

    let args = [
        "simulate",
        file.to_str().unwrap(),
        "--worst-case",
        "--victim",
        "0",
        "--samples",
        "500",
        "--seed",
        "7",
    ];
    let first = cac(&args);
    assert_eq!(first.status.code(), Some(0));
    let outcome = stdout_json(&first);
    assert_eq!(outcome["exact"], Value::Bool(false));
    // Same seed, same bytes — even under a different thread cap.
    assert_eq!(first.stdout, cac(&args).stdout);
    let mut capped: Vec<&str> = args.to_vec();
    capped.extend(["--threads", "1"]);
    assert_eq!(first.stdout, cac(&capped).stdout);
}

#[test]
fn simulate_requires_exactly_one_action() {
    let file = plain12();
    let neither = cac(&["simulate", file.to_str().unwrap()]);
    assert_eq!(neither.status.code(), Some(2));
    let both = cac(&[
        "simulate",
        file.to_str().unwrap(),
        "--offsets",
        "0,0,0",
        "--worst-case",
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn catalog_tsv_has_the_documented_columns() {
    let output = cac(&[
        "catalog", "--from", "18", "--to", "24", "--quantity", "ms", "--tsv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L\tlower\tupper\texact\tprovenance");
    assert_eq!(lines[1], "18\t2\t2\ttrue\tscac-odd-half-v");
    assert_eq!(lines[3], "22\t2\t2\ttrue\tscac-odd-half-ii");
    assert_eq!(lines[4], "24\t1\t3\tfalse\ttrivial-lower,even-upper");
    assert_eq!(lines.len(), 5);
}

#[test]
fn catalog_json_mirrors_the_tsv_rows() {
    let args = ["catalog", "--from", "10", "--to", "13"];
    let output = cac(&args);
    assert_eq!(output.status.code(), Some(0));
    let rows: Vec<BoundResult> = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].value(), Some(2));
    assert!(!rows[2].is_applicable()); // the length-12 table entry is non-integral
    assert_eq!(rows[3].value(), Some(3));
    assert_eq!(output.stdout, cac(&args).stdout);
}
