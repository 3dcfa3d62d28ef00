use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// Outcome of one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
    pub wall_ms: u128,
    pub data: Value,
}

pub struct ReportBuilder {
    command: String,
    parameters: Value,
    checks: Vec<Check>,
    data: Value,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(command: &str, parameters: Value) -> Self {
        ReportBuilder {
            command: command.into(),
            parameters,
            checks: Vec::new(),
            data: Value::Null,
            start: Instant::now(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<Value>) {
        self.checks.push(Check { name: name.into(), passed, witness });
    }

    pub fn data(&mut self, data: Value) {
        self.data = data;
    }

    pub fn finish(self) -> RunReport {
        let failures = self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        RunReport {
            command: self.command,
            parameters: self.parameters,
            checks: self.checks,
            failures,
            wall_ms: self.start.elapsed().as_millis(),
            data: self.data,
        }
    }
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.failures.is_empty())
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(if c.passed { "PASS  " } else { "FAIL  " });
            s.push_str(&c.name);
            if let (false, Some(w)) = (c.passed, &c.witness) {
                s.push_str(&format!("  witness: {w}"));
            }
            s.push('\n');
        }
        let passed = self.checks.len() - self.failures.len();
        s.push_str(&format!("{}: {passed}/{} checks passed in {} ms\n", self.command, self.checks.len(), self.wall_ms));
        s
    }
}
