//! Deterministic run artifacts: a JSON report embedding the resolved
//! configuration, plus CSV tables. Identical inputs must produce
//! byte-identical files, so maps are sorted, floats use shortest
//! round-trip formatting, and nothing time- or host-dependent is written.

use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    /// Resolved configuration echo (reproducibility contract).
    pub inputs: serde_json::Value,
    pub outputs: BTreeMap<String, serde_json::Value>,
    /// Pass/fail per module invariant exercised by the run.
    #[serde(rename = "invariant_report")]
    pub invariants: BTreeMap<String, bool>,
}

impl RunReport {
    pub fn new(tool: &str, inputs: serde_json::Value) -> Self {
        Self {
            tool: tool.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            outputs: BTreeMap::new(),
            invariants: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.outputs.insert(key.to_string(), v);
    }

    pub fn set_invariant(&mut self, key: &str, holds: bool) {
        self.invariants.insert(key.to_string(), holds);
    }

    pub fn invariants_hold(&self) -> bool {
        self.invariants.values().all(|&v| v)
    }

    pub fn failing_invariants(&self) -> Vec<&str> {
        self.invariants
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(Error::from)
    }
}

/// Shortest round-trip decimal representation (what serde_json emits), so
/// CSV and JSON agree byte for byte on every value.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        // CSV has no NaN/inf convention worth inventing; surface the bug.
        panic!("non-finite value in output table: {v}");
    }
    serde_json::to_string(&v).expect("finite float serializes")
}

/// Write a CSV table with a header row. All cells are numeric.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = Vec::with_capacity(rows.len() * header.len() * 12 + 64);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let mut first = true;
        for v in row {
            if !first {
                out.push(b',');
            }
            out.extend_from_slice(format_float(*v).as_bytes());
            first = false;
        }
        out.push(b'\n');
    }
    std::fs::write(path, out).map_err(Error::from)
}
