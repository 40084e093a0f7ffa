use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nobodies_cli::job::job_from_value;
use nobodies_cli::parse_job;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn jobs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn job(name: &str) -> PathBuf {
    jobs_dir().join(format!("{name}.json"))
}

fn nobodies(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nobodies"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = nobodies(args);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn shipped_jobs_parse_and_echo_round_trips() {
    let mut seen = 0;
    for entry in std::fs::read_dir(jobs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_job(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let echo = nobodies_cli::job::job_json(&parsed);
        assert_eq!(job_from_value(&echo).unwrap(), parsed, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn quartic_tropical_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("t.svg");
    let p = job("quartic-tropical");
    let (code, v) = run(&["curve-body", "tropical", "--input", p.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let body = &v["canonical"]["result"]["body"];
    assert_eq!(body["kind"], "overgraph");
    assert_eq!(body["boundary"]["breakpoints"], serde_json::json!([["0", "0"], ["2", "0"], ["4", "1/2"]]));
    assert_eq!(body["boundary"]["domain"], serde_json::json!(["0", "4"]));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let labels: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("text")).filter_map(|n| n.text()).collect();
    assert!(labels.contains(&"(2, 0)") && labels.contains(&"(4, 1/2)"), "{labels:?}");
    assert!(doc.descendants().any(|n| n.attribute("stroke") == Some("url(#hatch)")));
}

#[test]
fn quartic_arakelov_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("a.svg");
    let out = dir.path().join("a.json");
    let p = job("quartic-arakelov");
    let (code, _) = run(&[
        "curve-body",
        "arakelov",
        "--input",
        p.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b = &v["canonical"]["result"]["body"]["boundary"];
    assert_eq!(b["breakpoints"], serde_json::json!([["0", "2"], ["1/2", "4"]]));
    assert_eq!(b["tail_slope"], "0");
    assert_eq!(b["domain"][1], "+inf");
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let labels: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("text")).filter_map(|n| n.text()).collect();
    assert!(labels.contains(&"(0, 2)") && labels.contains(&"(1/2, 4)"), "{labels:?}");
}

#[test]
fn results_are_reproducible() {
    let p = job("quartic-arakelov");
    let args = ["curve-body", "arakelov", "--input", p.to_str().unwrap(), "--no-timing"];
    let a = nobodies(&args).stdout;
    let b = nobodies(&args).stdout;
    assert_eq!(a, b);

    let (_, with_timing) = run(&args[..4]);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(with_timing["canonical"], v["canonical"]);
    assert_eq!(with_timing["digest"], v["digest"]);
    assert!(with_timing["timing"]["elapsed_us"].is_u64());
    assert!(v.get("timing").is_none());

    let canonical = serde_json::to_vec(&v["canonical"]).unwrap();
    let hex: String = Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(v["digest"], format!("sha256:{hex}"));
    let echo = job_from_value(&v["canonical"]["job"]).unwrap();
    assert_eq!(echo, parse_job(&std::fs::read_to_string(&p).unwrap()).unwrap());
}

#[test]
fn exit_codes() {
    let (code, v) = run(&["rank", "--input", job("rank-negative-point").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"]["result"]["nonnegative_rank"], false);

    let (code, v) = run(&["linsys", "min", "--input", job("empty-system").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["canonical"]["status"], "empty");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "rank", "payload": {"graph": {"vertices": ["a"], "edges": []}, "lambda": {"a": "1/0"}}}"#)
        .unwrap();
    let out = nobodies(&["rank", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("BadRational") && stderr(&out).contains("payload.lambda.a"));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = nobodies(&["rank", "--input", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("SchemaError"));

    let out = nobodies(&["rank", "--input", job("quartic-tropical").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "kind must match the subcommand");

    let out = nobodies(&["curve-body", "arakelov", "--input", job("quartic-tropical").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "flag type must match the subcommand");

    let out = nobodies(&[
        "curve-body",
        "tropical",
        "--input",
        job("quartic-tropical").to_str().unwrap(),
        "--svg",
        dir.path().join("x.svg").to_str().unwrap(),
        "--window",
        "2,1,0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("WindowEmpty"));
}

#[test]
fn linear_system_operations() {
    let (code, v) = run(&["linsys", "shift", "--input", job("quartic-shift").to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["canonical"]["result"];
    assert_eq!(r["minimal_element"]["Q1"], "2/5");
    // the shifted divisor is effective with zero minimal element
    assert!(r["shifted"].as_object().unwrap().values().all(|c| !c.as_str().unwrap().starts_with('-')));

    let (code, v) = run(&["linsys", "member", "--input", job("quartic-member").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["canonical"]["result"]["member"], true);
}

#[test]
fn toric_d1_body_and_figure() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("d1.svg");
    let p = job("toric-d1");
    let (code, v) = run(&["toric-body", "--input", p.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let body = &v["canonical"]["result"]["body"];
    assert_eq!(body["vertices"], serde_json::json!([["0", "0"], ["1", "1"]]));
    assert_eq!(body["rays"], serde_json::json!([["0", "1"]]));
    roxmltree::Document::parse(&std::fs::read_to_string(&svg).unwrap()).unwrap();
}

fn all_checks_pass(v: &Value) -> bool {
    let r = &v["canonical"]["result"];
    r["all_passed"] == true && r["checks"].as_array().is_some_and(|c| !c.is_empty())
}

#[test]
fn verify_quartic_and_toric() {
    for name in ["quartic-tropical", "quartic-arakelov", "toric-d1", "toric-d2", "rank-quartic", "quartic-min"] {
        let (code, v) = run(&["verify", "--input", job(name).to_str().unwrap(), "--seed", "11"]);
        assert_eq!(code, 0, "{name}");
        assert!(all_checks_pass(&v), "{name}: {}", v["canonical"]["result"]);
        // the wrapped job is echoed as a verify job and re-parses
        let echo = job_from_value(&v["canonical"]["job"]).unwrap();
        assert_eq!(echo.payload.kind(), "verify");
    }
}

#[test]
fn verify_fifty_random_curve_jobs() {
    let (code, v) = run(&["verify", "--input", job("verify-random-curves").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(all_checks_pass(&v));
    let checks = v["canonical"]["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 50);
    assert!(checks.iter().filter(|c| c["outcome"] == "pass").count() >= 45, "most jobs are nonempty");
}
