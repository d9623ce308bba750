use serde_json::Value;
use std::process::{Command, Output};

fn kmw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = kmw(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

#[test]
fn steinberg_symbol_normalizes_to_zero() {
    let (v, code) = json(&["--field", "GF(2)(t)", "normalize", "[t][1-t]"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["zero"], "Equal");
}

#[test]
fn eta_h_is_zero_in_degree_minus_one() {
    let (v, _) = json(&["--field", "GF(5)", "normalize", "eta h"]);
    assert_eq!(v["degree"], -1);
    assert_eq!(v["kind"], "witt");
    assert_eq!(v["zero"], "Equal");
}

#[test]
fn bracket_of_one_is_zero() {
    let o = kmw(&["normalize", "[1]"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("degree: 1"), "{text}");
    assert!(text.contains("zero: yes"), "{text}");
}

#[test]
fn equal_with_bound_letters() {
    for (field, a, b) in [("GF(7)", "a=3", "b=a+1"), ("GF(2)(t)", "a=t", "b=a+1"), ("GF(4)(t)", "a=t", "b=a^2+t+1")] {
        let o = kmw(&["--field", field, "--let", a, "--let", b, "equal", "[a][b]", "eps [b][a]"]);
        assert_eq!(o.status.code(), Some(0), "{field}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("Equal"));
    }
}

#[test]
fn unequal_and_undecided_exit_codes() {
    let o = kmw(&["--field", "GF(5)", "equal", "[2]", "[3]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NotEqual"));
    let o = kmw(&["--field", "GF(2)(t,u)", "equal", "[t][u]", "[u][t]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("not decided"));
}

#[test]
fn theta_of_two_symbols() {
    let (v, code) = json(&["--field", "GF(2)(t,u)", "theta", "[t][u]"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["certified"], true);
    let text = stdout(&kmw(&["--field", "GF(2)(t,u)", "theta", "[t][u]"]));
    assert!(text.contains("<1, t, u, t*u>"), "{text}");
}

#[test]
fn decompose_metabolic_plane() {
    let (v, code) = json(&["--field", "GF(2)(t)", "decompose", "--witt", "t,t^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["anisotropic_rank"], 0);
    assert_eq!(v["metabolic_rank"], 2);
    assert_eq!(v["verified"], true);
}

#[test]
fn decompose_reports_pfister_forms() {
    let (v, code) = json(&["--field", "GF(2)(t,u)", "decompose", "--witt", "1,t,u,t u"]);
    assert_eq!(code, 0);
    assert_eq!(v["anisotropic_rank"], 4);
    assert_eq!(v["pfister"]["degree"], 2);
    assert_eq!(v["pfister"]["verified"], true);
}

#[test]
fn chain_between_equivalent_forms() {
    let (v, code) = json(&["--field", "GF(5)", "chain", "1,1", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    let o = kmw(&["--field", "GF(5)", "chain", "1,1", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_lemma2_over_gf7() {
    let (v, code) = json(&["--field", "GF(7)", "--cases", "500", "verify", "--suite", "lemma2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "kmw-verify/1");
    assert_eq!(v["cases"], v["passed"]);
    for id in v["identities"].as_array().unwrap() {
        assert_eq!(id["cases"], 500);
        assert!(id["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_vanishing_over_two_variables() {
    let o = kmw(&["--field", "GF(2)(t,u)", "verify", "--suite", "vanishing"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_all_skips_char2_suites_in_odd_characteristic() {
    let (v, code) = json(&["--field", "GF(3)", "--cases", "3", "verify"]);
    assert_eq!(code, 0);
    let skipped: Vec<&str> = v["skipped"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(skipped, ["kw_char2", "kato"]);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--json", "--field", "GF(2)(t)", "--seed", "11", "--cases", "20", "verify", "--suite", "kato"];
    assert_eq!(kmw(&args).stdout, kmw(&args).stdout);
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    for args in [
        &["verify", "--suite", "unknown"][..],
        &["--field", "GF(6)", "normalize", "1"],
        &["--field", "GF(5)(t)", "normalize", "1"],
        &["normalize", "[0]"],
        &["normalize", "[1] + eta"],
        &["--let", "x", "normalize", "1"],
        &["--field", "GF(3)", "verify", "--suite", "kato"],
    ] {
        let o = kmw(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{args:?}");
    }
}
