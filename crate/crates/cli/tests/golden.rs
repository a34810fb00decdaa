mod common;

use std::collections::HashSet;

use serde_json::Value;

#[test]
fn corpus_is_large_enough_and_names_are_unique() {
    let cases = common::cases();
    assert!(cases.len() >= 40, "only {} cases", cases.len());
    let names: HashSet<_> = cases.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names.len(), cases.len());
}

#[test]
fn outputs_match_recorded_files() {
    let bad = common::mismatches(common::blessing());
    assert!(bad.is_empty(), "golden mismatch (rerun with RAMLAB_BLESS=1 after review): {bad:?}");
}

#[test]
fn every_run_is_deterministic() {
    for case in common::cases().iter().take(10) {
        assert_eq!(common::record(case), common::record(case), "{}", case.name);
    }
}

fn exit_for(body: &Value) -> Option<i32> {
    if body.get("error").is_some() {
        return Some(3);
    }
    match body.get("status").and_then(Value::as_str) {
        Some("holds-with-witness") => return Some(0),
        Some("fails-on-window") => return Some(1),
        Some("inconclusive") => return Some(2),
        _ => {}
    }
    if let Some(cert) = body.get("certificate").filter(|c| c.is_object()) {
        return Some(if cert["all_verified"] == true { 0 } else { 1 });
    }
    if body.get("outcome").is_some() {
        return Some(if body["nonexistence"] == true { 1 } else { 2 });
    }
    if body.get("mode").and_then(Value::as_str) == Some("sampled") && body.get("ramsey").is_some() {
        return Some(if body["ramsey"] == true { 2 } else { 1 });
    }
    ["ramsey", "filter", "invariant", "holds", "rederived"]
        .iter()
        .find_map(|k| body.get(*k).and_then(Value::as_bool))
        .map(|ok| if ok { 0 } else { 1 })
}

#[test]
fn exit_codes_follow_status() {
    let mut checked = 0;
    for case in common::cases() {
        let (code, out) = common::record(&case);
        let json = out.split_once('\n').unwrap().1;
        if case.args.iter().any(|a| a == "text") {
            continue;
        }
        let body: Value = serde_json::from_str(json).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        if let Some(want) = exit_for(&body) {
            assert_eq!(code, want, "{}", case.name);
            checked += 1;
        }
    }
    assert!(checked >= 50, "only {checked} cases classified");
}

#[test]
fn text_output_carries_the_json_fields() {
    for args in [
        ["check", "thick", "--set", "mod(2,0)", "--window", "100", "--F", "0,1"],
        ["check", "syndetic", "--set", "pow2blocks", "--window", "200", "--G", "1,2,3"],
    ] {
        let json = ramlab_cli::run(std::iter::once("ramlab").chain(args));
        let text = ramlab_cli::run(std::iter::once("ramlab").chain(args).chain(["--format", "text"]));
        assert_eq!(json.code, text.code);
        let body: Value = serde_json::from_str(&json.stdout).unwrap();
        for key in body.as_object().unwrap().keys() {
            assert!(text.stdout.lines().any(|l| l.starts_with(key.as_str())), "{key} missing from text");
        }
    }
}
