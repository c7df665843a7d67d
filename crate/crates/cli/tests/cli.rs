mod common;

use common::{assert_cache_valid, assert_valid, json, run};
use serde_json::json;

#[test]
fn info_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for (d, order, exponent, class) in [
        ("g1[3,1,1,1]", 27, 3, json!(2)),
        ("g2[3,2,1,1]", 27, 9, json!(2)),
        ("c[1]", 1, 1, json!(0)),
        ("d[6]", 6, 6, json!(null)),
    ] {
        let out = run(&cache, &["info", d, "--json"]);
        assert!(out.status.success());
        let v = json(&out);
        assert_valid("info.schema.json", &v);
        assert_eq!(v["order"], order, "{d}");
        assert_eq!(v["exponent"], exponent, "{d}");
        assert_eq!(v["nilpotency_class"], class, "{d}");
    }
}

#[test]
fn parse_errors_carry_the_grammar() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&dir.path().join("c.jsonl"), &["info", "g1[3,1,1]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g1[p,alpha,beta,gamma]"), "{err}");
}

#[test]
fn loewy_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for (d, l) in [("g1[3,1,1,1]", 9), ("g3[3,3,2,2,1]", 39), ("m2[32]", 17)] {
        let out = run(&cache, &["loewy", d, "--method=both", "--json"]);
        assert!(out.status.success(), "{d}");
        let v = json(&out);
        assert_valid("output.schema.json", &v);
        assert_eq!(v["value"], l);
        assert_eq!(v["details"]["formula"], l);
        let sizes = v["details"]["chain_sizes"].as_array().unwrap();
        assert_eq!(sizes.last().unwrap(), 1);
    }
    let out = run(&cache, &["loewy", "c[3]", "--json"]);
    assert_eq!(json(&out)["value"], 3);
    let out = run(&cache, &["loewy", "d[6]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&cache, &["loewy", "c[4]", "--method=formula"]);
    assert_eq!(out.status.code(), Some(2));
    assert_cache_valid(&cache);
}

#[test]
fn davenport_round_trips_through_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let first = json(&run(&cache, &["davenport", "q[8]", "--json"]));
    assert_valid("output.schema.json", &first);
    assert_eq!(first["value"], 5);
    assert_eq!(first["exact"], true);
    assert_eq!(first["cache_hit"], false);
    let second = json(&run(&cache, &["davenport", "q[8]", "--json"]));
    assert_eq!(second["cache_hit"], true);
    assert_eq!(second["value"], first["value"]);
    assert_eq!(second["witness"], first["witness"]);
    let fresh = json(&run(&cache, &["davenport", "q[8]", "--json", "--no-cache"]));
    assert_eq!(fresh["cache_hit"], false);
    assert_eq!(json(&run(&cache, &["davenport", "c[1]", "--json"]))["value"], 1);
    let u = json(&run(&cache, &["davenport", "m2[16]", "--variant=unordered", "--json"]));
    assert_eq!((u["invariant"].as_str(), u["value"].as_u64()), (Some("Dprime"), Some(9)));
    let w = json(&run(&cache, &["davenport", "c[5]", "--variant=weighted", "--weights=1,4", "--json"]));
    assert_eq!(w["value"], 3);
    let e = json(&run(&cache, &["davenport", "c[4]", "--variant=E", "--json"]));
    assert_eq!(e["value"], 7);
    assert_cache_valid(&cache);
}

#[test]
fn budget_exhaustion_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = run(&cache, &["davenport", "sd[32]", "--budget-states=50", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["exact"], false);
    assert_eq!(v["bounds"]["lower_source"], "partial_search");
    // an inexact record is a cache miss
    let again = json(&run(&cache, &["davenport", "sd[32]", "--budget-states=50", "--json"]));
    assert_eq!(again["cache_hit"], false);
    let too_big = run(&cache, &["davenport", "c[65]"]);
    assert_eq!(too_big.status.code(), Some(2));
}

#[test]
fn witnesses_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for (d, th, lower) in [("q[12]", "1", 7), ("g2[3,2,1,1]", "6", 11), ("d[8]", "7", 5), ("g1[5,1,1,1]", "6", 17)] {
        let out = run(&cache, &["witness", d, &format!("--theorem={th}"), "--verify", "--json"]);
        assert!(out.status.success(), "{d}");
        let v = json(&out);
        assert_valid("output.schema.json", &v);
        assert_eq!(v["value"], true, "{d}");
        assert_eq!(v["bounds"]["lower"], lower, "{d}");
        let again = json(&run(&cache, &["witness", d, &format!("--theorem={th}"), "--verify", "--json"]));
        assert_eq!(again["cache_hit"], true);
        assert_eq!(again["witness"], v["witness"]);
    }
    let y5x = json(&run(&cache, &["witness", "q[12]", "--theorem=1", "--json"]));
    assert_eq!(y5x["witness"], json!(["y", "y", "y", "y", "y", "x"]));
    assert_eq!(y5x["value"], 6);
    assert_cache_valid(&cache);
}

#[test]
fn scope_is_enforced_unless_exploring() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = run(&cache, &["witness", "g1[3,2,2,2]", "--theorem=6", "--verify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&cache, &["witness", "g1[3,2,2,2]", "--theorem=6", "--verify", "--unverified-explore", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["details"]["in_scope"], false);
    let out = run(&cache, &["witness", "q[8]", "--theorem=6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for d in ["g1[3,1,1,1]", "g1[17,1,1,1]", "g3[5,3,2,2,1]"] {
        let out = run(&cache, &["oracle", d, "--json"]);
        assert!(out.status.success(), "{d}");
        let v = json(&out);
        assert_valid("output.schema.json", &v);
        assert_eq!(v["value"], true);
    }
    assert_eq!(run(&cache, &["oracle", "g2[3,2,1,1]"]).status.code(), Some(2));
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    std::fs::write(&cache, "garbage\n{\"v\":1}\n").unwrap();
    let out = run(&cache, &["davenport", "c[3]", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt"));
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = run(&cache, &["scan", "--families=d,q,sd,m2", "--param-ranges=order=8..32", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_valid("scan.schema.json", &v);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r["status"] == "CONFIRMED" && r["lower"] == r["loewy"]));
    let out = run(&cache, &["scan", "g2[3,2,1,1]", "g2[3,2,2,1]", "g1[3,1,1,1]", "--csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("descriptor,order,L,"));
    assert_eq!(text.lines().filter(|l| l.ends_with("CONFIRMED,")).count(), 3, "{text}");
    let out = run(&cache, &["scan", "g1[3,2,2,2]", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["rows"][0]["status"], "CONSISTENT");
    assert_cache_valid(&cache);
}
