//! Golden outputs against docs/schemas. The validator covers the keywords
//! the shipped schemas use: type, required, properties, items, enum, oneOf,
//! minimum, minItems, maxItems and pattern.

mod common;

use std::fs;
use std::path::Path;

use regex::Regex;
use serde_json::Value;

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unsupported type {other}"),
    }
}

fn validate(schema: &Value, v: &Value, path: &str, errs: &mut Vec<String>) {
    let s = schema.as_object().expect("schema object");
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_ok(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errs.push(format!("{path}: expected type {t}, got {v}"));
            return;
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            errs.push(format!("{path}: {v} not in {e:?}"));
        }
    }
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let passing = alts
            .iter()
            .filter(|a| {
                let mut e = Vec::new();
                validate(a, v, path, &mut e);
                e.is_empty()
            })
            .count();
        if passing != 1 {
            errs.push(format!("{path}: {passing} oneOf branches match"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_i64), v.as_i64()) {
        if x < min {
            errs.push(format!("{path}: {x} < {min}"));
        }
    }
    if let (Some(p), Some(x)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
        if !Regex::new(p).unwrap().is_match(x) {
            errs.push(format!("{path}: `{x}` does not match {p}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for r in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(r.as_str().unwrap()) {
                errs.push(format!("{path}: missing {r}"));
            }
        }
        for (k, sub) in s.get("properties").and_then(Value::as_object).into_iter().flatten() {
            if let Some(x) = obj.get(k) {
                validate(sub, x, &format!("{path}.{k}"), errs);
            }
        }
    }
    if let Some(arr) = v.as_array() {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < n {
                errs.push(format!("{path}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if arr.len() as u64 > n {
                errs.push(format!("{path}: more than {n} items"));
            }
        }
        if let Some(items) = s.get("items") {
            for (i, x) in arr.iter().enumerate() {
                validate(items, x, &format!("{path}[{i}]"), errs);
            }
        }
    }
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))).unwrap()
}

fn schema_for(args: &[String], body: &Value) -> &'static str {
    if body.get("error").is_some() {
        return "error";
    }
    match (args[0].as_str(), args.get(1).map(String::as_str)) {
        ("check", Some("density")) => "density",
        ("check", Some("harmonic")) => "harmonic",
        ("check", _) => "verdict",
        ("verify", Some("chain")) => "chain",
        ("verify", _) => "tree",
        ("eval", _) => "eval",
        ("gen", _) => "gen",
        ("family", _) => "family",
        ("build", _) => "build",
        ("laws", _) => "laws",
        (other, _) => panic!("no schema for {other}"),
    }
}

fn errors(name: &str, body: &Value) -> Vec<String> {
    let mut errs = Vec::new();
    validate(&schema(name), body, "$", &mut errs);
    errs
}

#[test]
fn golden_json_outputs_validate() {
    let mut validated = 0;
    for case in common::cases() {
        if case.args.iter().any(|a| a == "text") {
            continue;
        }
        let (_, out) = common::record(&case);
        let body: Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
        let errs = errors(schema_for(&case.args, &body), &body);
        assert!(errs.is_empty(), "{}: {errs:?}", case.name);
        validated += 1;
    }
    assert!(validated >= 40);
}

#[test]
fn validator_rejects_broken_documents() {
    let out = ramlab_cli::run(["ramlab", "check", "thick", "--set", "pow2blocks", "--window", "100", "--F", "0,1"]);
    let mut body: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(errors("verdict", &body).is_empty());
    body["status"] = Value::from("maybe");
    assert!(!errors("verdict", &body).is_empty());
    body.as_object_mut().unwrap().remove("status");
    assert!(!errors("verdict", &body).is_empty());
    let bad_ratio = serde_json::json!({
        "property": "density", "expr": "all", "window": 4, "n": 4, "count": 4,
        "ratio": "1.0", "running_max": "1/1", "running_max_at": 1
    });
    assert!(!errors("density", &bad_ratio).is_empty());
}
