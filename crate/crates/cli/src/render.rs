use serde_json::Value;

use crate::args::Format;

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", v, &mut lines);
            let mut s = lines.join("\n");
            s.push('\n');
            s
        }
    }
}

/// `key: value` lines; nested objects use dotted keys, arrays stay compact JSON.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push(format!("{prefix}:"));
            out.extend(s.lines().map(|l| format!("  {l}")));
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}
