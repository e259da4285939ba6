//! The `regulus` command line: outputs, formats and exit codes.

use std::process::Command;

use regulus::cli::{run, EXIT_BUDGET, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("regulus").chain(args.iter().copied()).map(std::ffi::OsString::from), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn expand_matches_known_coefficients() {
    let (code, out) = call(&["expand", "f2^3/f1^3", "--trunc", "6"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("1 + 3q^1 + 6q^2 + 13q^3 + 24q^4 + 42q^5 + 73q^6 + O(q^7)"), "{out}");

    let (code, out) = call(&["--format", "json", "expand", "f2^3/f1^3", "--trunc", "3", "--mod", "2"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "1", "0", "1"]));
}

#[test]
fn oracle_tables_are_csv() {
    let (code, out) = call(&["oracle", "tuple", "--nmax", "4", "--ell", "2", "--k", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "n,value\n0,1\n1,3\n2,6\n3,13\n4,24\n");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["verify", "--claim", "ramanujan-5", "--n-max", "50"]).0, EXIT_PASS);
    assert_eq!(call(&["verify", "--claim", "c1.4.1:e3.0[alpha=0]", "--n-max", "10"]).0, EXIT_FAIL);
    assert_eq!(call(&["--budget", "100", "verify", "--claim", "ramanujan-5", "--n-max", "50"]).0, EXIT_BUDGET);
    assert_eq!(call(&["verify", "--theorem", "bogus"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify"]).0, EXIT_USAGE);
    assert_eq!(call(&["expand", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(call(&["no-such-command"]).0, EXIT_USAGE);
}

#[test]
fn conjectures_do_not_gate() {
    let (code, out) = call(&["verify", "--theorem", "conjp", "--primes", "5", "--n-max", "50"]);
    assert_eq!(code, EXIT_PASS, "{out}");
}

#[test]
fn listing_and_claim_files_roundtrip() {
    let (code, out) = call(&["verify", "--list"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().count() > 100);

    let (_, json) = call(&["--format", "json", "verify", "--theorem", "ramanujan", "--list"]);
    let dir = std::env::temp_dir().join(format!("regulus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let claims = dir.join("claims.json");
    std::fs::write(&claims, json).unwrap();
    let report = dir.join("report.json");
    let (code, _) = call(&[
        "--format",
        "json",
        "--out",
        report.to_str().unwrap(),
        "verify",
        "--claims-file",
        claims.to_str().unwrap(),
        "--n-max",
        "100",
    ]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v.to_string().contains("ramanujan-5"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn density_csv() {
    let (code, out) = call(&[
        "--format", "csv", "density", "--series", "f2^3/f1^3", "--a", "9", "--b", "1", "--mod", "6", "--checkpoints",
        "10,100",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "X,count,proportion\n10,6,0.600000\n100,86,0.860000\n");
}

#[test]
fn modcheck_bseries() {
    let (code, out) = call(&["modcheck", "--bseries", "l=2 p=2 a=1 m=2 k=3"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("minimal level 384"), "{out}");
    assert_eq!(call(&["modcheck", "--bseries", "l=2 p=2"]).0, EXIT_USAGE);
}

#[test]
fn binary_reads_budget_from_environment() {
    let bin = env!("CARGO_BIN_EXE_regulus");
    let status = Command::new(bin)
        .args(["verify", "--claim", "ramanujan-5", "--n-max", "50"])
        .env("REGULUS_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_BUDGET));
    let ok = Command::new(bin).args(["newman", "--p", "5", "--n-max", "60"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&ok.stdout));
}
