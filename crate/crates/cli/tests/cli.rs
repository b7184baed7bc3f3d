//! Exit codes, the result cache and scenario handling through the binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::json;

use fclab::cache::{key, ResultCache};
use fclab::scenario::{parse_window, Scenario};

fn fclab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fclab"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .unwrap()
}

fn write_e1(dir: &Path) -> String {
    let p = dir.join("e1.json");
    let s = json!({
        "p": 32003, "vars": ["x", "y"],
        "I1": [[1, 0], [0, 1]], "I2": [[2, 0], [0, 2]],
        "seed": 1, "k1": 1, "k2": 1, "window": [3, 3], "fiber_nmax": 4
    });
    fs::write(&p, s.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bad_shape_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(
        &p,
        r#"{"vars":["x","y"],"I1":[[1,0],[0,1]],"I2":[[2,0],[0,2]],"k1":2,"k2":1}"#,
    )
    .unwrap();
    let out = fclab(&dir.path().join("c"), &["--scenario", p.to_str().unwrap(), "run"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn non_primary_ideal_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, r#"{"vars":["x","y"],"I1":[[1,0]],"I2":[[2,0],[0,2]]}"#).unwrap();
    let out = fclab(&dir.path().join("c"), &["--scenario", p.to_str().unwrap(), "hilbert", "table"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cached_check_is_reused_and_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_e1(dir.path());
    let cache = dir.path().join("c");
    let a = fclab(&cache, &["--scenario", &s, "check", "euler"]);
    let b = fclab(&cache, &["--scenario", &s, "check", "euler"]);
    let c = fclab(&cache, &["--scenario", &s, "--no-cache", "--jobs", "1", "check", "euler"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(ResultCache::open(&cache).unwrap().entries().unwrap().len(), 1);
}

#[test]
fn tampered_cache_fails_verification_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_e1(dir.path());
    let cache = dir.path().join("c");
    assert!(fclab(&cache, &["--scenario", &s, "fiber", "series"]).status.success());
    let ok = fclab(&cache, &["cache", "verify"]);
    assert_eq!(ok.status.code(), Some(0));
    let entry = ResultCache::open(&cache).unwrap().entries().unwrap().remove(0);
    let text = fs::read_to_string(&entry).unwrap().replacen("\"values\": [\n", "\"values\": [\n      9,\n", 1);
    fs::write(&entry, text).unwrap();
    let bad = fclab(&cache, &["cache", "verify"]);
    assert_eq!(bad.status.code(), Some(2));
    // The damaged entry is recomputed on the next use.
    assert!(fclab(&cache, &["--scenario", &s, "fiber", "series"]).status.success());
    assert_eq!(fclab(&cache, &["cache", "verify"]).status.code(), Some(0));
}

#[test]
fn seq_verify_certifies_e1() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_e1(dir.path());
    let out = fclab(&dir.path().join("c"), &["--scenario", &s, "seq", "verify", "--k1", "1", "--k2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certified"], true);
}

#[test]
fn run_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_e1(dir.path());
    let out_dir = dir.path().join("out");
    let out = fclab(
        &dir.path().join("c"),
        &["--scenario", &s, "run", "--out", out_dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 0);
    assert!(fclab::report::float_free(&report));
    let md = fs::read_to_string(out_dir.join("report.md")).unwrap();
    assert!(md.contains("| depth-transfer |"));
}

proptest! {
    #[test]
    fn windows_parse_in_every_form(a in 0i64..50, b in 0i64..50) {
        prop_assert_eq!(parse_window(&format!("{a},{b}")).unwrap(), [a, b]);
        prop_assert_eq!(parse_window(&format!("{a}x{b}")).unwrap(), [a, b]);
        prop_assert_eq!(parse_window(&a.to_string()).unwrap(), [a, a]);
    }

    #[test]
    fn canonical_form_is_a_fixed_point(
        a in 1u32..6, b in 1u32..6, seed in 0u64..1000, w in 1i64..6,
    ) {
        let text = json!({
            "vars": ["x", "y"],
            "I1": [[a, 0], [0, b]], "I2": [[b, 0], [0, a]],
            "seed": seed, "window": [w, w],
        })
        .to_string();
        let s = Scenario::parse(&text).unwrap();
        let c = s.canonical();
        prop_assert_eq!(Scenario::parse(&c).unwrap().canonical(), c.clone());
        prop_assert_ne!(key(&c, "hilbert/table"), key(&c, "hilbert/fit"));
    }
}
