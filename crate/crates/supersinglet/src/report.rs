//! Deterministic JSON rendering for reports.
//!
//! Identical in-memory documents must serialize to identical bytes:
//! object keys are already sorted (`serde_json::Value` maps are
//! ordered), and every float is rendered at 17 significant digits
//! (`{:.16e}`), which round-trips `f64` exactly. Output is pretty-
//! printed with two-space indentation for human inspection without
//! sacrificing byte determinism.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::Result;

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(f) = n.as_f64() {
                out.push_str(&format!("{f:.16e}"));
            } else {
                out.push_str("null");
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                write_indent(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            write_indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                write_indent(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            write_indent(out, depth);
            out.push('}');
        }
    }
}

/// Renders a JSON document deterministically (sorted keys, floats at
/// 17 significant digits, two-space indent, trailing newline).
pub fn to_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

/// Writes [`to_string`] output to a file.
pub fn write_to_path(value: &Value, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_string(value).as_bytes())?;
    Ok(())
}
