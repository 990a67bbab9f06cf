//! Report assembly and rendering.
//!
//! Keys are kept sorted and every float is printed with 17 significant
//! digits, so equal inputs give byte-identical reports.

use bgf_core::{FrameBounds, C64};
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

/// A float as a JSON number with 17 significant digits; non-finite values
/// become `null`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_string_unchecked(format!("{x:.16e}")))
    } else {
        Value::Null
    }
}

pub fn complex(z: C64) -> Value {
    let mut m = Map::new();
    m.insert("im".into(), number(z.im));
    m.insert("re".into(), number(z.re));
    Value::Object(m)
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Clone, Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(command: &[String]) -> Self {
        let mut r = Report::default();
        r.set("command", Value::from(command.to_vec()));
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn set_f64(&mut self, key: &str, x: f64) -> &mut Self {
        self.set(key, number(x))
    }

    /// Inserts into the nested object `section`, creating it if needed.
    pub fn entry(&mut self, section: &str, key: &str, value: impl Into<Value>) -> &mut Self {
        let slot = self
            .0
            .entry(section.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        if let Value::Object(m) = slot {
            m.insert(key.to_string(), value.into());
        }
        self
    }

    pub fn entry_f64(&mut self, section: &str, key: &str, x: f64) -> &mut Self {
        self.entry(section, key, number(x))
    }

    pub fn bounds(&mut self, bounds: &FrameBounds) -> &mut Self {
        self.entry_f64("bounds", "C", bounds.lower)
            .entry_f64("bounds", "D", bounds.upper)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("report serializes")
    }

    /// One `dotted.key: value` line per leaf.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        flatten("", &Value::Object(self.0.clone()), &mut lines);
        lines.join("\n")
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(m) if !m.is_empty() => {
            for (k, v) in m {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push(format!("{prefix}: {}", parts.join(" ")));
        }
        other => out.push(format!("{prefix}: {}", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
