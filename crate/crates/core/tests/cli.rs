use std::io::Write;

use adg_core::cli::{main_with, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with(std::iter::once("adg").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).unwrap())
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn girth_assume_transitive() {
    let (code, v) = json(&["girth", "--family", "D", "--n", "3", "--q", "3", "--assume-transitive"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"], 8);
    assert_eq!((v["n"].as_u64(), v["q"].as_u64()), (Some(3), Some(3)));
    assert!(v["scanned"].as_u64().unwrap() > 0);
}

#[test]
fn cover_check_pass_and_fail() {
    let (code, v) = json(&["cover-check", "--from", "D:5:3", "--to", "A:4:3", "--map", "lemma21", "--policy", "exhaustive"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["verdict"]["verdict"], "pass");

    // lemma21 only goes from D(2k+1,q) to A(k+2,q)
    let (code, _, _) = run(&["cover-check", "--from", "D:5:3", "--to", "A:3:3", "--map", "lemma21"]);
    assert_eq!(code, EXIT_USAGE);

    let (code, v) = json(&["cover-check", "--from", "D:5:3", "--to", "D:3:3", "--map", "projection", "--policy", "sampled:50"]);
    assert_eq!(code, EXIT_OK);
    // draws are with replacement; duplicates are checked once
    let checked = v["result"]["verdict"]["sources_checked"].as_u64().unwrap();
    assert!(checked > 0 && checked <= 50);
}

#[test]
fn size_refusal_exit_code() {
    let (code, out, err) = run(&["girth", "--family", "D", "--n", "9", "--q", "999999937"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(err.contains("2^63"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "resource_refusal");

    let (code, _, _) = run(&["components", "--graph", "A:6:5", "--mem-budget", "1K"]);
    assert_eq!(code, EXIT_RESOURCE);
}

#[test]
fn spectrum_with_check() {
    let (code, v) = json(&["spectrum", "--family", "D", "--n", "3", "--q", "5", "--check-2sqrtq"]);
    assert_eq!(code, EXIT_OK);
    let r = &v["result"];
    assert!((r["lambda1"].as_f64().unwrap() - 5.0).abs() < 1e-8);
    assert!(r["lambda2"].as_f64().unwrap() <= r["bound"].as_f64().unwrap());
    assert_eq!(r["method"], "dense");
}

#[test]
fn spectrum_flags_disconnected_graphs() {
    let (_, raw) = json(&["spectrum", "--graph", "D:6:2"]);
    let (_, per) = json(&["spectrum", "--graph", "D:6:2", "--per-component"]);
    assert_eq!(raw["result"]["component_note"], true);
    assert!((raw["result"]["lambda2"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert!(per["result"]["lambda2"].as_f64().unwrap() < 2.0 - 1e-6);
}

#[test]
fn shape_check_applies_to_a_only() {
    let (code, v) = json(&["shape-check", "--graph", "A:4:3"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["result"]["Ok"].is_object());
    assert_eq!(run(&["shape-check", "--graph", "D:4:3"]).0, EXIT_USAGE);
}

#[test]
fn every_format_is_honored() {
    for cmd in [
        vec!["girth", "--graph", "D:2:3"],
        vec!["cycle-through-origin", "--graph", "A:3:3"],
        vec!["components", "--graph", "D:6:2"],
        vec!["shape-check", "--graph", "A:3:3"],
        vec!["cover-check", "--from", "D:3:3", "--to", "A:3:3", "--map", "lemma21"],
        vec!["spectrum", "--graph", "D:2:3"],
        vec!["turan", "--n", "100", "--k", "2"],
        vec!["report", "--graph", "D:2:3"],
        vec!["export", "--graph", "D:2:2"],
    ] {
        for format in ["json", "csv", "text"] {
            let mut args = cmd.clone();
            args.extend(["--format", format]);
            let (code, out, err) = run(&args);
            assert_eq!(code, EXIT_OK, "{args:?}: {err}");
            assert!(!out.trim().is_empty(), "{args:?}");
            if format == "json" {
                serde_json::from_str::<Value>(&out).unwrap();
            }
        }
    }
}

#[test]
fn csv_report_has_one_row_per_component() {
    let (code, out, _) = run(&["report", "--graph", "D:6:3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "ratio"));
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert!(rows.len() > 1);
}

#[test]
fn edgelist_export() {
    let (code, out, _) = run(&["export", "--graph", "D:2:2", "--format", "edgelist"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    // 2^2 points of degree 2
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "P0 L4");
    let mut sorted = lines.clone();
    sorted.sort_by_key(|l| {
        let (p, l) = l.split_once(' ').unwrap();
        (p[1..].parse::<u64>().unwrap(), l[1..].parse::<u64>().unwrap())
    });
    assert_eq!(lines, sorted);
    assert_eq!(run(&["girth", "--graph", "D:2:2", "--format", "edgelist"]).0, EXIT_USAGE);
}

#[test]
fn output_is_deterministic() {
    let args = ["cover-check", "--from", "D:5:3", "--to", "A:4:3", "--map", "lemma21", "--policy", "sampled:200", "--seed", "7"];
    let (_, a) = json(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "1"]);
    let (_, b) = json(&with_workers);
    assert_eq!(without_timing(a), without_timing(b));

    let (_, a) = json(&["girth", "--graph", "D:4:3"]);
    let (_, b) = json(&["girth", "--graph", "D:4:3", "--workers", "3"]);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn system_file_and_modulus() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# D(3, q) written out\np2 + l2 = p1*l1\np3 + l3 = p1*l2").unwrap();
    let path = file.path().to_str().unwrap();
    let (code, v) = json(&["girth", "--system", path, "--q", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"], 8);
    assert_eq!(v["family"], "custom");

    let (code, v) = json(&["components", "--graph", "A:3:8", "--modulus", "1,1,0,1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["count"], 1);
    // reducible: x^3+1 = (x+1)(x^2+x+1)
    assert_eq!(run(&["components", "--graph", "A:3:8", "--modulus", "1,0,0,1"]).0, EXIT_USAGE);
    // defines GF(4), not GF(8)
    assert_eq!(run(&["components", "--graph", "A:3:8", "--modulus", "1,1,1"]).0, EXIT_USAGE);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "p2 + l2 = p2*l1").unwrap();
    let (code, _, err) = run(&["girth", "--system", bad.path().to_str().unwrap(), "--q", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn turan_values() {
    let (code, v) = json(&["turan", "--n", "64", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["epsilon"], 0);
    assert!((v["result"]["lower"].as_f64().unwrap() - 101.593_667_325_964_77).abs() < 1e-9);
    assert_eq!(run(&["turan", "--n", "1", "--k", "3"]).0, EXIT_USAGE);
}

#[test]
fn repro_rows_subset() {
    let (code, v) = json(&["repro", "--rows", "7,10"]);
    assert_eq!(code, EXIT_OK);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["pass"] == true));
    assert_eq!(run(&["repro", "--rows", "12"]).0, EXIT_USAGE);
}

#[test]
fn violation_exit_code() {
    // D(6,5) splits into components, so its raw second value is q = 5 > 2 sqrt(5)
    let (code, v) = json(&["spectrum", "--graph", "D:6:5", "--check-2sqrtq"]);
    assert_eq!(v["result"]["component_note"], true);
    assert_eq!(code, EXIT_VIOLATION);
}
