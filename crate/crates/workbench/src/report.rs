//! Reports: one JSON value rendered either verbatim or as text.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::spec::SCHEMA;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub source: String,
    pub flags: Vec<String>,
    pub inputs_digest: String,
    pub results: Map<String, Value>,
    pub status: Vec<String>,
    pub trail: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let out = h.finalize();
    let hex: String = out.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl Report {
    pub fn new(command: &str, source: &str, flags: Vec<String>, inputs_digest: String) -> Report {
        Report {
            schema: SCHEMA,
            command: command.into(),
            source: source.into(),
            flags,
            inputs_digest,
            results: Map::new(),
            status: Vec::new(),
            trail: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.into(), value.into());
    }

    pub fn step(&mut self, s: impl Into<String>) {
        self.trail.push(s.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let flags = if self.flags.is_empty() { String::new() } else { format!(" {}", self.flags.join(" ")) };
        out.push_str(&format!("{} {} ({}){flags}\n", self.schema, self.command, self.source));
        out.push_str(&format!("inputs {}\n", self.inputs_digest));
        for (k, v) in &self.results {
            render(&mut out, k, v, 0);
        }
        out.push_str(&format!("status: {}\n", self.status.join(" ")));
        if !self.warnings.is_empty() {
            out.push_str("warnings:\n");
            for w in &self.warnings {
                out.push_str(&format!("  - {w}\n"));
            }
        }
        if !self.trail.is_empty() {
            out.push_str("trail:\n");
            for s in &self.trail {
                out.push_str(&format!("  - {s}\n"));
            }
        }
        out
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        // sentences go one per line
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object() && !x.as_str().is_some_and(|s| s.contains(", "))) => {
            Some(format!("[{}]", a.iter().map(|x| inline(x).expect("flat")).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(s) = inline(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match inline(x) {
                    Some(s) if x.is_array() => out.push_str(&format!("{pad}  {}\n", s.trim_start_matches('[').trim_end_matches(']').replace(", ", "\t"))),
                    Some(s) => out.push_str(&format!("{pad}  - {s}\n")),
                    None => render(out, &format!("[{i}]"), x, indent + 1),
                }
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                render(out, k, x, indent + 1);
            }
        }
        _ => unreachable!("inline handles scalars"),
    }
}
