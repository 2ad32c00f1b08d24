//! CLI-level acceptance: every command re-run with the same seed writes
//! byte-identical output, exit codes follow the parse/domain/budget
//! contract, and the emitted schemas stay pinned.

use std::path::{Path, PathBuf};
use std::process::Command;

use trigrearr::{io, TrigPolynomial, TrigTerm};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trigrearr"))
}

fn run_to(args: &[&str], out: &Path) {
    let status = bin().args(args).arg("--out").arg(out).status().unwrap();
    assert!(status.success(), "command failed: {args:?}");
}

fn rerun_is_identical(dir: &Path, label: &str, args: &[&str]) -> bool {
    let first = dir.join(format!("{label}.1"));
    let second = dir.join(format!("{label}.2"));
    run_to(args, &first);
    run_to(args, &second);
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert!(!a.is_empty(), "{label}: empty output");
    a == b
}

#[test]
fn criterion_9_byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let poly = dir.join("poly.json");
    let samples = dir.join("samples.csv");
    run_to(
        &["gen", "--degree", "40", "--kind", "random", "--amp", "pow:0.5", "--seed", "3"],
        &poly,
    );
    run_to(
        &["gen", "--degree", "12", "--kind", "salem", "--seed", "4", "--samples", "256"],
        &samples,
    );
    let poly = poly.to_str().unwrap();
    let samples = samples.to_str().unwrap();

    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--degree", "40", "--kind", "random", "--amp", "pow:0.5", "--seed", "3"]),
        ("gen-csv", vec!["gen", "--degree", "9", "--kind", "fejer", "--format", "csv"]),
        ("norm", vec!["norm", poly]),
        ("select", vec!["select", poly, "-m", "10", "--seed", "5"]),
        ("split", vec!["split", poly, "--seed", "6"]),
        ("round", vec!["round", poly, "--seed", "7"]),
        ("order", vec!["order", poly, "--seed", "8"]),
        ("rearrange", vec!["rearrange", samples, "--levels", "5", "--seed", "9"]),
        ("rearrange-csv", vec!["rearrange", samples, "--levels", "5", "--seed", "9", "--format", "csv"]),
        (
            "bench",
            vec![
                "bench", "--n", "32,64", "--m-frac", "0.25,0.5", "--seeds", "2", "--seed", "1",
            ],
        ),
    ];

    let mut all_identical = true;
    let mut names = Vec::new();
    for (label, args) in &cases {
        let same = rerun_is_identical(dir, label, args);
        if !same {
            names.push(*label);
        }
        all_identical &= same;
    }
    println!(
        "ACCEPTANCE 9 cli-determinism: {} ({} commands re-run byte-identically{})",
        if all_identical { "PASS" } else { "FAIL" },
        cases.len(),
        if names.is_empty() { String::new() } else { format!(", differing: {names:?}") },
    );
    assert!(all_identical);
}

#[test]
fn exit_codes_follow_the_fault_contract() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"d0\": oops").unwrap();
    let code = bin().args(["norm", bad.to_str().unwrap()]).status().unwrap().code();
    assert_eq!(code, Some(2), "parse failures exit 2");

    let poly = dir.path().join("p.json");
    run_to(&["gen", "--degree", "8", "--kind", "dirichlet"], &poly);
    let code =
        bin().args(["select", poly.to_str().unwrap(), "-m", "99"]).status().unwrap().code();
    assert_eq!(code, Some(3), "domain violations exit 3");

    // 200 terms parked at frequencies near 120000 push the embedding past
    // its budget.
    let big = TrigPolynomial::from_terms(
        0.0,
        (0..200u32).map(|i| TrigTerm::new(119_800 + i, 1.0, 0.0)),
    )
    .unwrap();
    let big_path = dir.path().join("big.json");
    std::fs::write(&big_path, io::poly_to_json(&big)).unwrap();
    let code = bin().args(["split", big_path.to_str().unwrap()]).status().unwrap().code();
    assert_eq!(code, Some(4), "budget overruns exit 4");

    let code = bin().args(["norm", "/definitely/not/there.json"]).status().unwrap().code();
    assert_eq!(code, Some(2), "unreadable inputs exit 2");
}

fn capture(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "command failed: {args:?}");
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn emitted_schemas_are_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("p.json");
    let samples = dir.path().join("s.csv");
    run_to(&["gen", "--degree", "24", "--kind", "random", "--seed", "2"], &poly);
    run_to(&["gen", "--degree", "6", "--kind", "random", "--seed", "2", "--samples", "128"], &samples);
    let poly = poly.to_str().unwrap();

    let norm = capture(&["norm", poly]);
    assert!(norm.starts_with("{\"lower\":"), "norm JSON leads with lower: {norm}");
    assert!(norm.contains("\"upper\":") && norm.contains("\"gridSize\":"));

    let select = capture(&["select", poly, "-m", "6"]);
    for key in [
        "\"k\":[", "\"n\":24", "\"m\":6", "\"complemented\":", "\"gamma\":", "\"alpha\":",
        "\"classesUsed\":", "\"padded\":", "\"fallback\":", "\"normRatio\":",
    ] {
        assert!(select.contains(key), "select JSON missing {key}: {select}");
    }

    let plan = capture(&["rearrange", samples.to_str().unwrap(), "--levels", "3"]);
    assert!(plan.starts_with("{\"N\":[1,"), "plan JSON leads with N: {plan}");
    let order = ["\"N\":", "\"blocks\":", "\"prefixErrors\":", "\"hypothesisConstant\":"];
    let mut last = 0;
    for key in order {
        let at = plan.find(key).unwrap_or_else(|| panic!("plan JSON missing {key}"));
        assert!(at >= last, "plan JSON keys out of order at {key}");
        last = at;
    }

    let bench = capture(&["bench", "--n", "32", "--m-frac", "0.5", "--seeds", "1"]);
    assert!(
        bench.starts_with("n,m,method,normRatio,bound,impliedConstant,seed,wallTimeMs\n"),
        "bench header drifted: {bench}"
    );
    let rows: Vec<&str> = bench.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "one cell, two methods: {bench}");
    assert!(rows.iter().all(|r| r.ends_with(",0")), "wallTimeMs defaults to 0");

    let empty = capture(&["bench", "--n", "32", "--m-frac", "0.5", "--seeds", "0"]);
    assert_eq!(empty, "n,m,method,normRatio,bound,impliedConstant,seed,wallTimeMs\n");
}

#[test]
fn csv_outputs_replay_into_the_same_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("p.json");
    let csv_path = dir.path().join("p.csv");
    run_to(&["gen", "--degree", "15", "--kind", "salem", "--seed", "6"], &json_path);
    run_to(&["gen", "--degree", "15", "--kind", "salem", "--seed", "6", "--format", "csv"], &csv_path);

    let from_json = capture(&["norm", json_path.to_str().unwrap()]);
    let from_csv = capture(&["norm", csv_path.to_str().unwrap()]);
    assert_eq!(from_json, from_csv, "JSON and CSV forms of one polynomial agree");
}

#[test]
fn bench_rows_arrive_sorted() {
    let out = capture(&["bench", "--n", "64,32", "--m-frac", "0.5,0.25", "--seeds", "2"]);
    let keys: Vec<(u32, u32, String, u64)> = out
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string(), f[6].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 16);
}

#[test]
fn thread_cap_does_not_change_bench_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bench", "--n", "48", "--m-frac", "0.25,0.75", "--seeds", "2"];
    let capped = dir.path().join("capped.csv");
    let free = dir.path().join("free.csv");
    let status = bin()
        .args(args)
        .arg("--out")
        .arg(&capped)
        .env("TRIGREARR_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    run_to(&args, &free);
    assert_eq!(std::fs::read(&capped).unwrap(), std::fs::read(&free).unwrap());
}

#[test]
fn outputs_land_in_files_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("fejer.json");
    run_to(&["gen", "--degree", "5", "--kind", "fejer"], &out);
    let text = std::fs::read_to_string(&out).unwrap();
    let t = io::poly_from_json(&text).unwrap();
    assert_eq!(t.degree(), 5);
    assert_eq!(t.d0(), 1.0);
}
