use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub source: String,
    /// Hex SHA-256 of the file bytes; absent for built-in inputs.
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of failing instances, when the scan counts them all.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Self {
        Self { name: name.into(), passed: true, failures: None, witness: None, note: None }
    }

    pub fn fail(name: &str, witness: Option<Value>) -> Self {
        Self { name: name.into(), passed: false, failures: None, witness, note: None }
    }

    /// Pass iff `failures == 0`; the witness is only kept on failure.
    pub fn counted(name: &str, failures: usize, witness: Option<Value>) -> Self {
        Self {
            name: name.into(),
            passed: failures == 0,
            failures: Some(failures),
            witness: if failures == 0 { None } else { witness },
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub arguments: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, arguments: Vec<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            arguments,
            inputs: Vec::new(),
            seed,
            checks: Vec::new(),
            data: Map::new(),
            passed: true,
            elapsed_ms: None,
        }
    }

    pub fn input(&mut self, digest: InputDigest) {
        self.inputs.push(digest);
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.into(), value.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "bracketforge {}", self.command);
        for i in &self.inputs {
            match &i.sha256 {
                Some(h) => {
                    let _ = writeln!(out, "  input  {}  sha256:{}", i.source, &h[..16]);
                }
                None => {
                    let _ = writeln!(out, "  input  {}", i.source);
                }
            }
        }
        let _ = writeln!(out, "  seed   {}", self.seed);
        for (k, v) in &self.data {
            let _ = writeln!(out, "  {k}: {}", compact(v));
        }
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "  [{mark}] {}", c.name);
            if let Some(n) = c.failures.filter(|n| *n > 0) {
                let _ = write!(out, " ({n} failing)");
            }
            if let Some(note) = &c.note {
                let _ = write!(out, " - {note}");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "         witness: {}", compact(w));
            }
        }
        let _ = writeln!(out, "  result: {}", if self.passed { "PASS" } else { "FAIL" });
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "  elapsed: {ms} ms");
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
