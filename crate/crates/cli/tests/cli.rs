use std::process::{Command, Output};

use serde_json::Value;

fn negabeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negabeta"))
        .args(args)
        .env_remove("NEGABETA_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const TRIB: &str = "x^3-x^2-x-1";
const CUBIC: &str = "x^3-2x^2-x+1";

#[test]
fn reference_tribonacci() {
    let out = negabeta(&["reference", "--poly", TRIB, "--sign", "neg"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["d_l"], "10(1)");
    assert_eq!(v["d_r_star"], "010(1)");
    let pos = json_of(&negabeta(&["reference", "--poly", CUBIC, "--sign", "pos"]));
    assert_eq!(pos["d_one"], "2(01)");
}

#[test]
fn distances_cubic() {
    let out = negabeta(&["distances", "--poly", CUBIC, "--sign", "neg", "--k-max", "6"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let classes: Vec<&str> = v["table"]["classes"].as_array().unwrap().iter().map(|c| c["value"].as_str().unwrap()).collect();
    // 1, β − 1 and 1 − 1/β = β² − 2β
    assert_eq!(classes, ["1", "-1 + b", "-2*b + b^2"]);
    assert_eq!(v["table"]["pattern"]["holds"], true);
}

#[test]
fn distances_with_method() {
    let v = json_of(&negabeta(&["distances", "--poly", CUBIC, "--k-max", "6", "--method", "finite_table"]));
    assert!(v["method"]["values"].as_array().unwrap().iter().all(|x| x["agrees"] == true));
}

#[test]
fn admissible_exit_codes() {
    let no = negabeta(&["admissible", "--poly", "x^3-x-1", "--sign", "neg", "--word", "1(0)"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json_of(&no)["admissible"], false);
    let yes = negabeta(&["admissible", "--poly", TRIB, "--word", "10(1)"]);
    assert_eq!(yes.status.code(), Some(0));
}

#[test]
fn usage_and_error_exit_codes() {
    assert_eq!(negabeta(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(negabeta(&["reference"]).status.code(), Some(2));
    let trivial = negabeta(&["integers", "--poly", "x^3-x-1", "--count", "3"]);
    assert_eq!(trivial.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&trivial.stderr).unwrap();
    assert_eq!(err["error"], "TrivialSet");
    // a two-step orbit budget cannot close the Tribonacci orbit
    let undecided = negabeta(&["reference", "--poly", TRIB, "--orbit-budget", "2"]);
    assert_eq!(undecided.status.code(), Some(3));
}

#[test]
fn expand_golden_ratio_one() {
    let v = json_of(&negabeta(&["expand", "--poly", "x^2-x-1", "--value", "1"]));
    assert_eq!(v["pointed"], "110•");
}

#[test]
fn integers_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (poly, sign, extra) in [(TRIB, "neg", None), (CUBIC, "neg", None), (CUBIC, "pos", Some("--symmetric"))] {
        let path = dir.path().join(format!("{sign}.json"));
        let p = path.to_str().unwrap();
        let mut args = vec!["integers", "--poly", poly, "--sign", sign, "--count", "12", "-o", p];
        args.extend(extra);
        assert!(negabeta(&args).status.success());
        let out = negabeta(&["verify", "--input", p]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json_of(&out)["valid"], true);
    }
}

#[test]
fn verify_rejects_tampered_window() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let p = path.to_str().unwrap();
    assert!(negabeta(&["integers", "--poly", TRIB, "--count", "5", "-o", p]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let letters = v["gap_letters"].as_array_mut().unwrap();
    letters[0] = Value::from(letters[0].as_u64().unwrap() + 1);
    v["points"][3]["digits"] = Value::from("2");
    std::fs::write(&path, v.to_string()).unwrap();
    let out = negabeta(&["verify", "--input", p]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    assert_eq!(r["wrong_gap_letters"][0], 0);
    assert_eq!(r["inadmissible"][0], 3);
}

#[test]
fn integers_csv() {
    let out = negabeta(&["integers", "--poly", TRIB, "--count", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "digits,value_exact,value_approx,gap_letter");
    assert_eq!(lines.len(), 6);
}

#[test]
fn morphism_tribonacci() {
    let v = json_of(&negabeta(&["morphism", "--poly", TRIB, "--biword", "120"]));
    assert_eq!(v["phi"]["rules"]["0"], "01");
    assert_eq!(v["psi"]["rules"]["0"], "0201");
    assert_eq!(v["canonical_squared"]["rules"]["1"], "010");
    assert_eq!(v["conjugacy_witness"], "01");
    assert_eq!(v["biword"]["invariant_projected"], true);
    assert_eq!(v["commutation"]["holds"], true);
}

#[test]
fn morphism_cubic_has_no_conjugacy() {
    let v = json_of(&negabeta(&["morphism", "--poly", CUBIC]));
    assert_eq!(v["psi"]["rules"]["1"], "021101");
    assert_eq!(v["conjugacy_witness"], Value::Null);
}

#[test]
fn fractal_exports() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let out = negabeta(&["fractal", "--poly", TRIB, "--count", "3", "-o", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 3);
    assert!(text.contains("width=\"800\""));
    let csv = negabeta(&["fractal", "--poly", TRIB, "--count", "0", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "x,y\n");
    let unbounded = negabeta(&["fractal", "--poly", "x^3-2", "--count", "5"]);
    assert_eq!(unbounded.status.code(), Some(5));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("# tribonacci\npoly = {TRIB}\nsign = pos\norbit_budget = 2\n")).unwrap();
    let c = cfg.to_str().unwrap();
    // the file's budget is too small; the flag replaces it
    assert_eq!(negabeta(&["reference", "--config", c, "--sign", "neg"]).status.code(), Some(3));
    let out = negabeta(&["reference", "--config", c, "--orbit-budget", "100"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["d_one"], "111");
    std::fs::write(&cfg, "colour = red\n").unwrap();
    let bad = negabeta(&["base", "--config", c]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("colour"));
    std::fs::write(&cfg, "").unwrap();
    let empty = negabeta(&["base", "--config", c, "--poly", "x^2-x-1"]);
    assert!(empty.status.success());
}

#[test]
fn precision_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_negabeta"))
        .args(["reference", "--poly", TRIB])
        .env("NEGABETA_PRECISION_BITS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pretty_reference() {
    let out = negabeta(&["reference", "--poly", TRIB, "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("d_l") && l.ends_with("10(1)")));
}

#[test]
fn deterministic_output() {
    let a = negabeta(&["integers", "--poly", CUBIC, "--count", "10"]).stdout;
    let b = negabeta(&["integers", "--poly", CUBIC, "--count", "10"]).stdout;
    assert_eq!(a, b);
}
