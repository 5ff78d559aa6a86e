//! End-to-end checks of the binary: exit codes, canonical JSON, and the
//! witness round-trip (printed witnesses re-parse and re-fail the check).

use credal_choice::io;
use credal_choice::model::indicator;
use credal_choice::rational::is_negative;
use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_credal-choice");

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn independence_example_fails_with_reusable_witness() {
    let path = fixture("fixc2.json");
    let out = run(&[
        "--json",
        "check-independence",
        "-m",
        &path,
        "--level",
        "event",
        "--kind",
        "s-irrelevance",
        "--first",
        "A",
        "--second",
        "B",
        "--method",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["holds"], serde_json::json!(false));

    // Round-trip: rebuild the printed witness gamble and re-fail the direct
    // criterion against the model file.
    let text = std::fs::read_to_string(&path).unwrap();
    let mf = io::parse_model_file(&text).unwrap();
    let map: BTreeMap<String, String> = v["witness"]["gamble"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, val)| (k.clone(), val.as_str().unwrap().to_string()))
        .collect();
    let f = io::parse_gamble(&mf.space, &map).unwrap();
    let a = &mf.events["A"];
    let ind_co_a = indicator(&a.complement());
    let ind_a = indicator(a);
    let credal_choice::choice::ChoiceModel::Credal(m) = &mf.model else {
        panic!("fixture is credal")
    };
    let vertices = m.vertices().unwrap();
    let refail = vertices.iter().any(|q1| {
        vertices.iter().any(|q2| {
            is_negative(&q1.eval(&ind_co_a.mul(&f).unwrap()).unwrap())
                && is_negative(&q2.eval(&ind_a.mul(&f).unwrap().neg()).unwrap())
        })
    });
    assert!(refail, "printed witness must re-fail the direct criterion");
}

#[test]
fn member_exit_codes_follow_desirability() {
    let out = run(&["member", "-m", &fixture("fixvac2.json"), "-A", "pair"]);
    assert_eq!(out.status.code(), Some(1));
    // The same pair lifted above zero is desirable.
    let inline = r#"[{"1":"1/2","2":"1/4"},{"1":"1/4","2":"3/4"}]"#;
    let out = run(&["member", "-m", &fixture("fixvac2.json"), "-A", inline]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn mixing_witness_self_validates_via_reject_route() {
    let out = run(&["--json", "find-mixing-violation", "-m", &fixture("fixvac2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["violation"], serde_json::json!(true));
    // B must have fewer options than A and re-parse as valid gambles.
    assert!(v["B"].as_array().unwrap().len() < v["A"].as_array().unwrap().len());
    let text = std::fs::read_to_string(fixture("fixvac2.json")).unwrap();
    let mf = io::parse_model_file(&text).unwrap();
    for g in v["B"].as_array().unwrap() {
        let map: BTreeMap<String, String> = g
            .as_object()
            .unwrap()
            .iter()
            .map(|(k, val)| (k.clone(), val.as_str().unwrap().to_string()))
            .collect();
        io::parse_gamble(&mf.space, &map).unwrap();
    }
}

#[test]
fn json_output_is_canonical() {
    let out = run(&["--json", "eval", "-m", &fixture("fixc2.json"), "--gamble", "indB"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout.clone()).unwrap();
    // Sorted keys and reduced rationals.
    assert_eq!(s.trim(), r#"{"lower":"3/10","upper":"1/2"}"#);
}

#[test]
fn marginalize_output_reparses() {
    let out = run(&["--json", "marginalize", "-m", &fixture("fixcor1.json"), "--variable", "Y"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mf = io::parse_model_file(&text).unwrap();
    assert_eq!(mf.space.atoms(), ["y0", "y1"]);
    // Each member collapses to a single vertex.
    let credal_choice::choice::ChoiceModel::LowerSet(s) = &mf.model else {
        panic!("lower_set preserved")
    };
    for m in s.members() {
        assert_eq!(m.vertices().unwrap().len(), 1);
    }
}

#[test]
fn corollary_subcommand_passes_on_fixture() {
    let out = run(&[
        "corollary1",
        "-m",
        &fixture("fixcor1.json"),
        "-x",
        "X",
        "-y",
        "Y",
        "--budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn malformed_input_exits_two() {
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    tmp.write_all(br#"{"space": ["1", "2"], "model": {"kind": "linear", "pmf": {"1": "2/3", "2": "2/3"}}}"#)
        .unwrap();
    let out = run(&["eval", "-m", tmp.path().to_str().unwrap(), "--gamble", "f"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let out = run(&["eval", "-m", "/no/such/file.json", "--gamble", "f"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subset_cap_env_is_honoured() {
    let out = Command::new(BIN)
        .env("CREDAL_CHOICE_SUBSET_CAP", "1")
        .args([
            "check-independence",
            "-m",
            &fixture("fixunif.json"),
            "--level",
            "variable",
            "--kind",
            "s-irrelevance",
            "--first",
            "X",
            "--second",
            "Y",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}
