use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliResult;

#[derive(Serialize)]
pub struct Document {
    pub manifest: Value,
    pub records: Vec<Value>,
    pub summary: Value,
}

/// Nested objects become `a.b` keys and arrays `a_0, a_1, ...`.
pub fn flatten(v: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    flatten_into("", v, &mut out);
    out
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten_into(&format!("{prefix}_{i}"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

/// Rounds to 12 digits after the leading one and prints the shortest form of the result,
/// so every value survives a round trip to within 1e-12 relative.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.12e}").parse().unwrap_or(x);
    if (1e-4..1e15).contains(&rounded.abs()) {
        rounded.to_string()
    } else {
        format!("{rounded:e}")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_number(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_json(doc: &Document, mut w: impl Write) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    Ok(())
}

/// `# manifest.*` and `# summary.*` comment lines, then a header and one row per record.
/// Columns are the union of record keys in first-seen order.
pub fn write_csv(doc: &Document, mut w: impl Write) -> CliResult<()> {
    for (section, v) in [("manifest", &doc.manifest), ("summary", &doc.summary)] {
        for (k, x) in flatten(v) {
            writeln!(w, "# {section}.{k}={}", cell(&x))?;
        }
    }
    let rows: Vec<Map<String, Value>> = doc
        .records
        .iter()
        .map(|r| flatten(r).into_iter().collect())
        .collect();
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(&header)?;
    for r in &rows {
        out.write_record(header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()))?;
    }
    out.flush()?;
    Ok(())
}
