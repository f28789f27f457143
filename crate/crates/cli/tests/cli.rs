//! End-to-end tests of the `colmez` binary: exit codes, document shapes,
//! determinism, and cache transparency.

use std::process::{Command, Output};

fn colmez(args: &[&str], cache_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colmez"))
        .args(args)
        .env("COLMEZ_CACHE_DIR", cache_dir)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn strip_timing(mut v: serde_json::Value) -> String {
    v.as_object_mut().map(|o| o.remove("timing"));
    serde_json::to_string(&v).unwrap()
}

#[test]
fn field_command_shapes_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = colmez(&["field", "--modulus", "4"], dir.path());
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["g"], 1);
    assert_eq!(doc["discriminant"], "4");

    let out = colmez(&["field", "--modulus", "20", "--subgroup", "9"], dir.path());
    let doc = json_of(&out);
    assert_eq!(doc["g"], 2);
    assert_eq!(doc["discriminant"], "400");
    let odd: Vec<u64> = doc["characters"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["parity"] == "odd")
        .map(|c| c["conductor"].as_u64().unwrap())
        .collect();
    assert_eq!(odd, vec![4, 20]);

    // subgroup containing -1 is not a CM presentation
    let out = colmez(
        &["field", "--modulus", "20", "--subgroup", "19"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn height_command_and_type_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let out = colmez(&["height", "--field", "4", "--type", "full:1"], dir.path());
    assert!(out.status.success());
    let doc = json_of(&out);
    let mu = doc["mu_part"].as_f64().unwrap();
    assert!((mu + 0.5 * 2f64.ln()).abs() < 1e-12, "mu_part = -log2/2");

    // conjugate partial types have identical totals
    let a = json_of(&colmez(
        &["height", "--field", "5", "--type", "partial:1"],
        dir.path(),
    ));
    let b = json_of(&colmez(
        &["height", "--field", "5", "--type", "partial:4"],
        dir.path(),
    ));
    assert_eq!(a["total"], b["total"]);

    // conjugate pair inside one type spec is malformed
    let out = colmez(
        &["height", "--field", "5", "--type", "partial:1,4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = colmez(
        &["table", "--family", "biquadratic", "--primes", "5,13"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 3, "header plus two rows");
    assert!(lines[0].starts_with("p,discriminant,"));
    // delta column is constant across rows
    let delta = |line: &str| line.split(',').nth(4).unwrap().parse::<f64>().unwrap();
    assert!((delta(lines[1]) - delta(lines[2])).abs() < 1e-8);

    // empty prime list: header only, success
    let out = colmez(
        &["table", "--family", "biquadratic", "--primes", ""],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);

    // composite and wrong-residue inputs are rejected
    for bad in ["15", "7"] {
        let out = colmez(
            &["table", "--family", "biquadratic", "--primes", bad],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(3), "prime list `{bad}`");
    }
    let out = colmez(&["table", "--family", "cubic", "--primes", "5"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = colmez(
        &["verify", "--suite", "identities", "--conductor-max", "40"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));

    let out = colmez(
        &["verify", "--suite", "analytic", "--fields", "4,20:9,5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["summary"]["numeric_failures"], 0);

    // the convention discriminator: heights fail numerically under analytic
    let out = colmez(
        &["--convention", "analytic", "verify", "--suite", "heights"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    let averaged: Vec<&serde_json::Value> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["id"].as_str().unwrap().ends_with("/averaged"))
        .collect();
    assert!(!averaged.is_empty());
    for check in averaged {
        assert_eq!(check["pass"], false);
        // residual is g·log2π; the detail carries the discriminator
        let detail = check["detail"].as_str().unwrap();
        assert!(detail.contains("residual minus g·log2pi"));
    }

    // bad field spec
    let out = colmez(
        &["verify", "--suite", "identities", "--fields", "20:19"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    // bad flag
    let out = colmez(&["verify", "--suite", "bogus"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-cache", "verify", "--suite", "conductors"];
    let a = colmez(&args, dir.path());
    let b = colmez(&args, dir.path());
    assert_eq!(strip_timing(json_of(&a)), strip_timing(json_of(&b)));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["verify", "--suite", "heights", "--fields", "4,5"];
    let cold = colmez(&args, &cache);
    assert!(cache.join("lvalues.jsonl").exists(), "cache file written");
    let warm = colmez(&args, &cache);
    assert_eq!(strip_timing(json_of(&cold)), strip_timing(json_of(&warm)));
    // and deleting the cache reproduces the same bytes
    std::fs::remove_dir_all(&cache).unwrap();
    let again = colmez(&args, &cache);
    assert_eq!(strip_timing(json_of(&warm)), strip_timing(json_of(&again)));
}

#[test]
fn jobs_flag_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let one = colmez(
        &["--no-cache", "verify", "--suite", "identities"],
        dir.path(),
    );
    let four = colmez(
        &[
            "--no-cache",
            "--jobs",
            "4",
            "verify",
            "--suite",
            "identities",
        ],
        dir.path(),
    );
    assert_eq!(strip_timing(json_of(&one)), strip_timing(json_of(&four)));
}
