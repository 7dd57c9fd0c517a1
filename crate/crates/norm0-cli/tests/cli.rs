//! End-to-end tests driving the `norm0` binary: exit codes, output
//! formats, and cache behavior.

use std::path::Path;
use std::process::{Command, Output};

fn norm0(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_norm0"))
        .args(args)
        .env("NORM0_CACHE", cache)
        .env_remove("NORM0_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn structure_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["structure", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("quotient order = 12"));
    assert!(text.contains("direct-product claim: holds"));

    let out = norm0(dir.path(), &["structure", "9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "norm0-report/1");
    assert_eq!(doc["order"], 12);
    assert_eq!(doc["claim_al"]["holds"], true);

    let out = norm0(dir.path(), &["structure", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("quotient order = 1"));

    let out = norm0(dir.path(), &["structure", "48"]);
    assert!(stdout(&out).contains("claim: FAILS"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_claim_exit_codes_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["check-claim", "63"]);
    assert_eq!(out.status.code(), Some(0));

    let out = norm0(dir.path(), &["check-claim", "30"]);
    assert_eq!(out.status.code(), Some(0));

    let out = norm0(dir.path(), &["check-claim", "45"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("S3") && text.contains("w5"), "witness missing: {text}");

    let out = norm0(dir.path(), &["check-claim", "48"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("S4") && text.contains("w3"));
}

#[test]
fn eval_words() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["eval", "16", "(w16 S4)^3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("identity: true"));

    let out = norm0(dir.path(), &["eval", "9", "S3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[[3, 1], [0, 3]]"));
    assert!(text.contains("identity: false"));

    let out = norm0(
        dir.path(),
        &["eval", "256", "w256 S8 w256 S8 w256 S8^3 w256 S8^3"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("identity: true"));

    // unknown generator and parse errors exit 2
    let out = norm0(dir.path(), &["eval", "9", "zz"]);
    assert_eq!(out.status.code(), Some(2));
    let out = norm0(dir.path(), &["eval", "9", "(S3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn member_queries() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["member", "48", "4,1,0,4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("yes (delta=1, Delta=1, lambda=1)"));
    assert!(text.contains("coset lies in Gamma_0(48): no"));

    let out = norm0(dir.path(), &["member", "48", "5,1,0,5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no"));

    let out = norm0(dir.path(), &["member", "48", "1,1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("yes"));
    assert!(text.contains("coset lies in Gamma_0(48): yes"));

    // nonpositive determinant and malformed input exit 2
    for bad in ["1,0,0,-1", "2,1,4,2", "1,2,3", "a,b,c,d"] {
        let out = norm0(dir.path(), &["member", "48", bad]);
        assert_eq!(out.status.code(), Some(2), "input `{bad}`");
    }
}

#[test]
fn cayley_exports() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["cayley", "9", "--format", "gap"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("G := Group(w9, S3);"));

    let out = norm0(dir.path(), &["cayley", "2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["order"], 2);
    assert_eq!(doc["cayley"][0][1], 1);

    let target = dir.path().join("g48.dot");
    let out = norm0(
        dir.path(),
        &["cayley", "48", "--format", "dot", "--out", target.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let script = std::fs::read_to_string(&target).unwrap();
    assert!(script.contains("digraph cayley_48"));
    assert_eq!(script.matches("shape=circle").count(), 1);
}

#[test]
fn batch_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let out = norm0(dir.path(), &["batch", "2..20", "--report", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,sigma,q,v,epsilon,order,claim_AL,note");
    assert_eq!(lines.len(), 1 + 19);
    // N = 18 is the smallest level where the direct-product claim fails:
    // v3(18) = 2 puts S3 in the normalizer and 2 = -1 mod 3, so S3 does
    // not commute with w2. Every other level in 2..20 satisfies the claim.
    for line in &lines[1..] {
        if line.starts_with("18,") {
            assert!(line.contains(",false,"), "N=18 should fail: {line}");
            assert!(line.contains("w2") && line.contains("S3"));
        } else {
            assert!(line.contains(",true,"), "unexpected failure: {line}");
        }
    }

    let out = norm0(dir.path(), &["batch", "45..48", "--report", "csv"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("45,") && rows[0].contains(",false,"));
    assert!(rows[1].starts_with("46,") && rows[1].contains(",true,"));
    assert!(rows[3].starts_with("48,") && rows[3].contains(",false,"));

    let out = norm0(dir.path(), &["batch", "1..1", "--report", "csv"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("1,1,1,1,1,1,true"));

    let out = norm0(dir.path(), &["batch", "x..y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_transparency_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    // miss, then hit: byte-identical reports
    let first = norm0(dir.path(), &["structure", "48", "--format", "json"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(dir.path().join("N48.json").exists());
    let second = norm0(dir.path(), &["structure", "48", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout, "cache hit must match the miss byte for byte");

    // corrupt entry: recomputed transparently
    std::fs::write(dir.path().join("N48.json"), "{ not json").unwrap();
    let third = norm0(dir.path(), &["structure", "48", "--format", "json"]);
    assert_eq!(third.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&third)).unwrap();
    assert_eq!(doc["order"], 48);
    assert_eq!(doc["claim_al"]["holds"], false);
}

#[test]
fn selftest_with_absurd_budget_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_norm0"))
        .args(["selftest"])
        .env("NORM0_CACHE", dir.path())
        .env("NORM0_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("budget"));

    let out = Command::new(env!("CARGO_BIN_EXE_norm0"))
        .args(["selftest"])
        .env("NORM0_BUDGET", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn factor_cap_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_norm0"))
        .args(["structure", "97"])
        .env("NORM0_CACHE", dir.path())
        .env("NORM0_FACTOR_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let out = norm0(dir.path(), &["structure", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
