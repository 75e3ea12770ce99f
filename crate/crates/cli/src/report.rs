//! Serializable command reports.
//!
//! Every command emits one flat key-value document (JSON by default, CSV on
//! request); sweeps emit one row per parameter value instead. All numbers are
//! rounded to 9 significant digits before they enter a report, so JSON and
//! CSV emissions carry identical values and reruns with the same flags and
//! seed are byte-identical.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn result_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.result(key, sig9(value))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat key,value CSV of the same document.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\r\n");
        out.push_str(&format!("command,{}\r\n", csv_field(&self.command)));
        for (k, v) in &self.parameters {
            out.push_str(&format!("parameter.{k},{}\r\n", csv_field(&value_text(v))));
        }
        for (k, v) in &self.results {
            out.push_str(&format!("result.{k},{}\r\n", csv_field(&value_text(v))));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed,{seed}\r\n"));
        }
        out.push_str(&format!("tool_version,{}\r\n", csv_field(&self.tool_version)));
        out
    }
}

/// Rounds to 9 significant digits (the report precision).
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("rounded float parses")
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A sweep table: named columns plus one row per parameter value.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    /// RFC-4180-style CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push_str("\r\n");
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&x| sig9(x).to_string()).collect();
            out.push_str(&line.join(","));
            out.push_str("\r\n");
        }
        out
    }

    /// JSON lines: one flat object per row.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut obj = serde_json::Map::new();
            for (c, &x) in self.columns.iter().zip(row) {
                obj.insert(
                    c.clone(),
                    serde_json::Number::from_f64(sig9(x))
                        .map(Value::Number)
                        .unwrap_or(Value::Null),
                );
            }
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}
