//! Structured pass/fail records emitted by every verification.

use serde::Serialize;
use std::collections::BTreeMap;

/// Result of one verification: check name, parameters, verdict, and witness
/// data (residues, prime lists, first-mismatch positions). Failed checks
/// always carry a nonempty witness. With fixed inputs the record is
/// deterministic apart from `runtime_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
    pub witness: serde_json::Value,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Report {
            check: check.to_string(),
            params: BTreeMap::new(),
            pass: false,
            witness: serde_json::Value::Null,
            runtime_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("param serialization"),
        );
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn witness(mut self, witness: serde_json::Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    /// One-line JSON record for the report stream.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}
