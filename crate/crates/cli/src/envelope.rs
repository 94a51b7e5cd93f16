//! The JSON document every command prints.

use std::collections::BTreeMap;

use eqlines::{parse_rational, RationalExt};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    /// Arguments as given, without the program name.
    pub invocation: Vec<String>,
    pub inputs: Value,
    /// Exact values are `"p/q"` strings.
    pub results: Value,
    /// Decimal renderings of every exact value in `results`, keyed by JSON
    /// pointer. Lossy.
    pub approximate: BTreeMap<String, f64>,
    pub certificates: Value,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

impl Envelope {
    pub fn new(command: &str, inputs: Value, results: Value, certificates: Value) -> Self {
        let mut approximate = BTreeMap::new();
        collect_decimals(&results, "/results", &mut approximate);
        Self {
            command: command.to_string(),
            invocation: std::env::args().skip(1).collect(),
            inputs,
            results,
            approximate,
            certificates,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }
}

/// `[-]digits[/digits]`, the shape of an exact rational as the core writes it.
pub fn looks_exact(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut parts = body.splitn(2, '/');
    let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    match (parts.next(), parts.next()) {
        (Some(num), None) => digits(num),
        (Some(num), Some(den)) => digits(num) && digits(den),
        _ => false,
    }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn collect_decimals(v: &Value, path: &str, out: &mut BTreeMap<String, f64>) {
    match v {
        Value::String(s) if looks_exact(s) => {
            if let Ok(r) = parse_rational(s) {
                out.insert(path.to_string(), r.to_f64_lossy());
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                collect_decimals(item, &format!("{path}/{i}"), out);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                collect_decimals(item, &format!("{path}/{}", escape(k)), out);
            }
        }
        _ => {}
    }
}
