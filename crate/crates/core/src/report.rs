//! Structured pass/fail evidence.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_TAG: &str = "yoneda-lab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Hypothesis not met; the check did not apply.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Name of the mathematical property being checked.
    pub anchor: String,
    pub verdict: Verdict,
    /// Re-checkable data: the offending vector/map on failure, summary data otherwise.
    pub witness: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub instance: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl AuditReport {
    pub fn new(instance: impl Into<String>) -> Self {
        AuditReport { instance: instance.into(), checks: Vec::new() }
    }

    pub fn record(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        verdict: Verdict,
        witness: Value,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.to_string(),
            verdict,
            witness,
        });
        self
    }

    /// Records pass/fail from a boolean.
    pub fn check(&mut self, name: impl Into<String>, anchor: &str, ok: bool, witness: Value) -> bool {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self.record(name, anchor, verdict, witness);
        ok
    }

    pub fn pass(&mut self, name: impl Into<String>, anchor: &str, witness: Value) {
        self.record(name, anchor, Verdict::Pass, witness);
    }

    pub fn fail(&mut self, name: impl Into<String>, anchor: &str, witness: Value) {
        self.record(name, anchor, Verdict::Fail, witness);
    }

    pub fn skip(&mut self, name: impl Into<String>, anchor: &str, reason: &str) {
        self.record(name, anchor, Verdict::Skip, Value::String(reason.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: AuditReport) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}/{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for c in &self.checks {
            match c.verdict {
                Verdict::Pass => t.passed += 1,
                Verdict::Fail => t.failed += 1,
                Verdict::Skip => t.skipped += 1,
            }
        }
        t
    }

    /// JSON form with the schema tag and tally attached.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "schema": SCHEMA_TAG,
            "instance": self.instance,
            "checks": self.checks,
            "summary": self.tally(),
        })
    }
}
