//! Machine-readable output shared by every subcommand.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn new(check_id: impl Into<String>, ok: bool, witness: Option<Value>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { check_id: check_id.into(), status, witness }
    }

    pub fn skip(check_id: impl Into<String>, why: &str) -> Self {
        Self { check_id: check_id.into(), status: Status::Skip, witness: Some(Value::from(why)) }
    }
}

/// Hex SHA-256 over labelled inputs; each input is length-prefixed.
pub fn digest(inputs: &[(&str, &[u8])]) -> String {
    let mut h = Sha256::new();
    for (label, bytes) in inputs {
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    #[serde(flatten)]
    pub result: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, inputs: &[(&str, &[u8])]) -> Self {
        Self {
            command: command.to_string(),
            inputs_digest: digest(inputs),
            result: Map::new(),
            verdicts: Vec::new(),
            timings: Some(BTreeMap::new()),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.result.insert(key.to_string(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.record(label, start);
        out
    }

    pub fn record(&mut self, label: &str, start: Instant) {
        if let Some(t) = self.timings.as_mut() {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            t.insert(label.to_string(), (ms * 1e3).round() / 1e3);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    /// Sorts verdicts by `check_id` and drops timings if asked.
    pub fn finish(mut self, timings: bool) -> Self {
        self.verdicts.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        if !timings {
            self.timings = None;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_order_and_sorting() {
        let mut r = Report::new("h1", &[("file", b"{}")]);
        r.set("h1", 2);
        r.push(Verdict::new("b", true, None));
        r.push(Verdict::new("a", false, Some(Value::from(1))));
        let r = r.finish(false);
        assert!(!r.passed());
        let json = r.to_json();
        let pos = |k: &str| json.find(k).unwrap();
        assert!(pos("\"command\"") < pos("\"inputs_digest\"") && pos("\"inputs_digest\"") < pos("\"h1\":"));
        assert!(pos("\"check_id\": \"a\"") < pos("\"check_id\": \"b\""));
        assert!(!json.contains("timings"));
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest(&[("a", b"bc")]), digest(&[("ab", b"c")]));
        assert_eq!(digest(&[("x", b"1")]).len(), 64);
    }
}
