//! Rendering of serialized reports. Machine formats print every number with
//! the shortest representation that parses back to the same double.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use unruh_gas::Error;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "human_table", alias = "table")]
    HumanTable,
    Csv,
    Json,
}

pub fn error_line(e: &Error) -> String {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Leaf fields keyed by their dotted JSON path. Arrays of numbers stay whole;
/// arrays of records are left out.
pub fn flatten(v: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(child, key, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_array() || i.is_object()) => {}
        _ => out.push((path, v.clone())),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn table(v: &Value) -> String {
    let fields = flatten(v);
    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in fields {
        let shown = if v.is_null() {
            "-".to_string()
        } else {
            cell(&v)
        };
        s.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    s
}

/// Header row from the first record's flattened keys, then one row per record.
pub fn csv(rows: &[Value]) -> String {
    let mut s = String::new();
    let Some(first) = rows.first() else {
        return s;
    };
    let header: Vec<String> = flatten(first)
        .into_iter()
        .map(|(k, _)| csv_field(&k))
        .collect();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = flatten(row)
            .iter()
            .map(|(_, v)| csv_field(&cell(v)))
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => json(v),
        Format::Csv => csv(std::slice::from_ref(v)),
        Format::HumanTable => table(v),
    }
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}
