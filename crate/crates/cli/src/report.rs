use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// What a command produced: human lines for stdout, structured records for `--json`,
/// and any library-level property that failed.
pub struct Report {
    pub command: &'static str,
    pub inputs: BTreeMap<String, Value>,
    pub per_degree: Vec<Value>,
    pub extra: BTreeMap<String, Value>,
    pub lines: Vec<String>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: BTreeMap::new(),
            per_degree: Vec::new(),
            extra: BTreeMap::new(),
            lines: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.to_string(), json!(v));
    }

    pub fn degree(&mut self, v: impl Serialize) -> Result<(), CliError> {
        self.per_degree.push(serde_json::to_value(v)?);
        Ok(())
    }

    pub fn extra(&mut self, key: &str, v: impl Serialize) -> Result<(), CliError> {
        self.extra.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(())
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records a failed property; it is also echoed to stdout.
    pub fn violation(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.lines.push(format!("VIOLATION: {s}"));
        self.violations.push(s);
    }

    pub fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.violation(what);
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "per_degree": self.per_degree,
            "violations": self.violations,
        });
        let obj = v.as_object_mut().expect("object");
        for (k, x) in &self.extra {
            obj.insert(k.clone(), x.clone());
        }
        v
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
    }
}
