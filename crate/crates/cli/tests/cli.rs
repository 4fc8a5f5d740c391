use std::process::Command;

use p1red_cli::report::{Entry, Report};
use p1red_cli::{parse_primes, parse_range, run_args};

fn json(args: &[&str]) -> Report {
    let mut full = vec!["p1red"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--format", "json"]);
    let out = run_args(full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn reduction_report_round_trips() {
    let r = json(&["reduction", "(2*x^2+1)/x", "-p", "2,3"]);
    assert_eq!(r.schema_version, 1);
    assert_eq!(r.degree, 2);
    let Entry::Reduction(p2) = &r.results[0] else { panic!() };
    assert_eq!(p2.prime, 2);
    assert!(!p2.sgr);
    let Entry::Reduction(p3) = &r.results[1] else { panic!() };
    assert!(p3.sgr);
    let text = serde_json::to_string(&r).unwrap();
    let again: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(again, r);
}

#[test]
fn every_command_round_trips() {
    let cases: &[&[&str]] = &[
        &["analyze", "x^3 - 3*x", "-p", "2..7"],
        &["monodromy", "x^3 - 3*x"],
        &["criterion", "x^3 - 3*x", "-p", "2,3,5"],
        &["pcf", "x^2 - x"],
        &["bad-primes", "x^2 - 1", "--iterates", "2", "-p", "3,5,7"],
        &["quadratic-scan", "--num-range", "-2..2", "--den-range", "1..2"],
    ];
    for args in cases {
        let r = json(args);
        let again: Report = serde_json::from_str(&serde_json::to_string_pretty(&r).unwrap()).unwrap();
        assert_eq!(again, r, "{args:?}");
    }
}

#[test]
fn pcf_and_scan_examples() {
    let r = json(&["pcf", "x^2 - 1"]);
    let Entry::Pcf(p) = &r.results[0] else { panic!() };
    assert_eq!(p.verdict, "pcf");
    assert_eq!(p.rational_postcritical_points, vec!["-1", "0", "inf"]);

    let r = json(&["quadratic-scan", "--num-range", "-5..5", "--den-range", "1..4"]);
    let pcf: Vec<String> = r
        .results
        .iter()
        .filter_map(|e| match e {
            Entry::Quadratic(q) if q.verdict == "pcf" => Some(q.c.clone()),
            _ => None,
        })
        .collect();
    assert_eq!(pcf, vec!["-2", "-1", "0"]);
}

#[test]
fn exit_codes() {
    let out = run_args(["p1red", "pcf", "x^2 +"]);
    assert_eq!(out.code, 2);
    let v: serde_json::Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(v["error"], "parse");
    assert_eq!(run_args(["p1red", "reduction", "x^2", "-p", "4"]).code, 2);
    assert_eq!(run_args(["p1red", "monodromy", "x^13"]).code, 3);
    assert_eq!(run_args(["p1red", "monodromy", "x^13", "--monodromy-cap", "13"]).code, 0);
    assert_eq!(run_args(["p1red", "frobnicate"]).code, 2);
    assert_eq!(run_args(["p1red", "bad-primes", "x^2 - x"]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let a = run_args(["p1red", "analyze", "(x^3+2)/(x^2-5*x+1)", "-p", "2..13", "--format", "json"]);
    let b = run_args(["p1red", "analyze", "(x^3+2)/(x^2-5*x+1)", "-p", "2..13", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn prime_and_range_syntax() {
    assert_eq!(parse_primes("2,3,10..20").unwrap(), vec![2, 3, 11, 13, 17, 19]);
    assert!(parse_primes("9").is_err());
    assert_eq!(parse_range("-5..5").unwrap(), (-5, 5));
    assert!(parse_range("5..-5").is_err());
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_p1red"))
        .args(["reduction", "(2*x^2+1)/x", "-p", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("sgr no"));
    let out = Command::new(env!("CARGO_BIN_EXE_p1red")).args(["monodromy", "x^20"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
