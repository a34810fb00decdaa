//! Browser bindings for the ramlab demo page.
//!
//! The `*_json` functions hold the logic and run natively; the
//! `#[wasm_bindgen]` exports only convert errors to `JsValue`.

use ramlab::builder::{self, BuildOutcome, BuildRequest, Structure, XRule};
use ramlab::properties::{Query, Witness};
use ramlab::semigroup::NatRing;
use ramlab::{SetExpr, WindowSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest window the page may ask for.
pub const MAX_WINDOW: u64 = 200_000;

fn parse_set(expr: &str, window: u64) -> Result<(SetExpr, WindowSet), String> {
    if window == 0 || window > MAX_WINDOW {
        return Err(format!("window must lie in [1..{MAX_WINDOW}]"));
    }
    let e = SetExpr::parse(expr.trim()).map_err(|e| e.to_string())?;
    let w = e.eval(window).map_err(|e| e.to_string())?;
    Ok((e, w))
}

fn list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("`{t}` is not a natural number")))
        .collect()
}

/// Cells the page should mark for a witness.
fn highlight(q: &Query, w: &Witness) -> Vec<u64> {
    match (q, w) {
        (Query::Thick { f }, Witness::Translate { x })
        | (Query::PiecewiseSyndetic { f, .. }, Witness::Translate { x }) => f.iter().map(|o| o + x).collect(),
        (Query::Syndetic { g }, Witness::Uncovered { point }) => {
            std::iter::once(*point).chain(g.iter().map(|t| point + t)).collect()
        }
        (_, Witness::Sequence { terms }) => {
            let mut sums: Vec<u64> = (1u32..1 << terms.len())
                .map(|mask| terms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t).sum())
                .collect();
            sums.sort_unstable();
            sums.dedup();
            sums
        }
        (Query::Ap { k }, Witness::Progression { a, d }) => (0..*k as u64).map(|i| a + i * d).collect(),
        _ => Vec::new(),
    }
}

/// `{expr, window, count, members}` for a set expression.
pub fn eval_set_json(expr: &str, window: u64) -> Result<String, String> {
    let (e, w) = parse_set(expr, window)?;
    let members: Vec<u64> = w.iter().collect();
    Ok(json!({ "expr": e.to_string(), "window": w.window_max(), "count": members.len(), "members": members })
        .to_string())
}

/// Run one property check. `f` and `g` are comma-separated offset lists;
/// `k` is used by `ip` and `ap`.
pub fn check_property_json(
    expr: &str,
    window: u64,
    property: &str,
    f: &str,
    g: &str,
    k: u32,
) -> Result<String, String> {
    let (e, w) = parse_set(expr, window)?;
    let k = k as usize;
    let q = match property {
        "thick" => Query::Thick { f: list(f)? },
        "syndetic" => Query::Syndetic { g: list(g)? },
        "ps" => Query::PiecewiseSyndetic { g: list(g)?, f: list(f)? },
        "ip" => Query::Ip { k, search_bound: None, budget: 200_000 },
        "ap" => Query::Ap { k },
        other => return Err(format!("unknown property `{other}`")),
    };
    let v = q.run(&w).map_err(|e| e.to_string())?;
    let marks = v.witness.as_ref().map(|wit| highlight(&q, wit)).unwrap_or_default();
    let mut body = serde_json::to_value(&v).map_err(|e| e.to_string())?;
    body["params"]["expr"] = Value::from(e.to_string());
    body["reverified"] = Value::from(q.reverify(&w, &v));
    body["highlight"] = json!(marks);
    Ok(body.to_string())
}

/// Search for `k` sums of blocks of `seq` inside the set, over ℕ.
pub fn build_subsystem_json(seq: &str, expr: &str, k: u32, structure: &str, budget: u64) -> Result<String, String> {
    let rule: XRule = seq.parse().map_err(|e: ramlab::Error| e.to_string())?;
    let structure: Structure = structure.parse().map_err(|e: ramlab::Error| e.to_string())?;
    let e = SetExpr::parse(expr.trim()).map_err(|e| e.to_string())?;
    let m = e.compile().map_err(|e| e.to_string())?;
    let member = |v: &u64| m.contains(*v);
    let ring = NatRing::default();
    let req = BuildRequest {
        ring: &ring,
        x_rule: rule.to_string(),
        x: rule.nat_prefix(builder::DEFAULT_INDEX_BOUND).map_err(|e| e.to_string())?,
        member: &member,
        set: e.to_string(),
        k: k as usize,
        structure,
        budget: budget.min(1_000_000),
        seed: 0,
        exhaustive: false,
    };
    let out = builder::build(&req).map_err(|e| e.to_string())?;
    let mut body = serde_json::to_value(&out).map_err(|e| e.to_string())?;
    if let BuildOutcome::Built { certificate, .. } = &out {
        body["highlight"] = json!(certificate.fs_elements);
    }
    Ok(body.to_string())
}

#[wasm_bindgen]
pub fn eval_set(expr: &str, window: u32) -> Result<String, JsValue> {
    eval_set_json(expr, window.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check_property(expr: &str, window: u32, property: &str, f: &str, g: &str, k: u32) -> Result<String, JsValue> {
    check_property_json(expr, window.into(), property, f, g, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn build_subsystem(seq: &str, expr: &str, k: u32, structure: &str, budget: u32) -> Result<String, JsValue> {
    build_subsystem_json(seq, expr, k, structure, budget.into()).map_err(|e| JsValue::from_str(&e))
}
